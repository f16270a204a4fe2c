//! Left-coset tables of double cosets `K n K`, built by orbit enumeration.

use std::collections::{HashMap, VecDeque};

use num_complex::Complex64;

use super::lattice::{apply, hermite_form, hermite_form_mod, lattice_contains, ModRing, Vector};
use crate::affine::Case;
use crate::chevalley::{GroupElement, Sp4};
use crate::filtration::{build_strong_k, Character, FiltrationGroup, Mu};
use crate::scalar::{int, Scalar};
use crate::Error;

pub type Key = Vec<u64>;

/// A group `K` with a character `χ` and the data needed to enumerate cosets of `K`.
#[derive(Debug, Clone)]
pub struct Setting {
    pub k: FiltrationGroup,
    pub chi: Character,
    gens: Vec<(GroupElement, Complex64)>,
    lattices: Vec<Vec<Vector>>,
    lattice_ints: Vec<Vec<[u64; 4]>>,
    pub size_bound: usize,
    pub tolerance: f64,
}

fn unit(i: usize, s: Scalar) -> Vector {
    let mut v: Vector = Default::default();
    v[i] = s;
    v
}

/// Lattices between `p L₀` and `L₀ = Z_p^4`, together with `L₀` and `(1, 1, p, p) L₀`,
/// offered as fingerprint candidates.
fn candidate_lattices(sp: &Sp4) -> Vec<Vec<Vector>> {
    let p = sp.prime();
    let ps = p.as_scalar();
    let plain: Vec<Vector> = (0..4).map(|i| unit(i, int(1))).collect();
    let scaled: Vec<Vector> = (0..4)
        .map(|i| unit(i, if i < 2 { int(1) } else { ps.clone() }))
        .collect();
    let p_l0: Vec<Vector> = (0..4).map(|i| unit(i, ps.clone())).collect();
    let mut out = vec![plain, scaled];
    let lines = |a: usize, b: usize| -> Vec<Vector> {
        let mut v: Vec<Vector> = (0..p.get() as i64)
            .map(|c| {
                let mut x = unit(a, int(1));
                x[b] = int(c);
                x
            })
            .collect();
        v.push(unit(b, int(1)));
        v
    };
    for v in lines(0, 1) {
        let mut gens = p_l0.clone();
        gens.push(v);
        out.push(gens);
    }
    for w in lines(2, 3) {
        let mut gens = p_l0.clone();
        gens.push(unit(0, int(1)));
        gens.push(unit(1, int(1)));
        gens.push(w);
        out.push(gens);
    }
    out
}

impl Setting {
    pub fn new(k: FiltrationGroup, chi: Character) -> Result<Self, Error> {
        let gens = k
            .generators()
            .into_iter()
            .map(|g| {
                let c = chi.eval(&k, &g)?;
                Ok((g, c))
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let p = k.prime().clone();
        let lattices = candidate_lattices(k.sp())
            .into_iter()
            .filter(|l| {
                let h = hermite_form(&p, l).expect("full rank");
                gens.iter()
                    .all(|(g, _)| h.iter().all(|b| lattice_contains(&p, &h, &apply(g, b))))
            })
            .collect::<Vec<_>>();
        let lattice_ints = lattices
            .iter()
            .map(|l| {
                l.iter()
                    .map(|v| {
                        let mut o = [0u64; 4];
                        for (x, s) in o.iter_mut().zip(v.iter()) {
                            *x = p.reduce(s, 2).expect("entries below p^2");
                        }
                        o
                    })
                    .collect()
            })
            .collect();
        Ok(Setting {
            k,
            chi,
            gens,
            lattices,
            lattice_ints,
            size_bound: 20_000,
            tolerance: 1e-6,
        })
    }

    /// `H(K⁺, ψ)`: the pro-unipotent group with the normalized generic character.
    pub fn weak(sp: &Sp4, case: Case, multiplier: u64) -> Result<Self, Error> {
        let k = FiltrationGroup::k_plus(sp);
        let chi = Character::normalized(sp, case, multiplier, Mu::trivial())?;
        Self::new(k, chi)
    }

    /// `H(K, χ)` with `K = T_ψ K⁺` or `T_α K⁺`.
    pub fn strong(sp: &Sp4, case: Case, mu: Mu, multiplier: u64) -> Result<Self, Error> {
        let (k, chi) = build_strong_k(sp, case, mu, multiplier)?;
        Self::new(k, chi)
    }

    pub fn sp(&self) -> &Sp4 {
        self.k.sp()
    }

    pub fn case(&self) -> Case {
        self.chi.case()
    }

    pub fn q(&self) -> u64 {
        self.k.prime().get()
    }

    pub fn generators(&self) -> &[(GroupElement, Complex64)] {
        &self.gens
    }

    /// Number of lattices used in the fingerprint.
    pub fn fingerprint_width(&self) -> usize {
        self.lattices.len()
    }

    /// A function of the coset `xK`: with `c = -min v(x_ij)`, the Hermite forms of
    /// `p^c x L` over the `K`-stable lattices `L ⊇ pL₀`. Each contains `p^{2c+1} L₀`, so the
    /// forms are computed exactly in `Z / p^{2c+1}`.
    pub fn key(&self, x: &GroupElement) -> Key {
        let p = self.k.prime();
        let c = (0..4)
            .flat_map(|i| (0..4).filter_map(move |j| p.valuation(x.entry(i, j))))
            .min()
            .map_or(0, |v| (-v).max(0));
        let ring = ModRing::new(p.get(), (2 * c + 1) as u32);
        let scale = p.pow(c);
        let mut xs = [[0u64; 4]; 4];
        for (i, row) in xs.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = p
                    .reduce(&(x.entry(i, j) * &scale), ring.e)
                    .expect("scaled entries are integral");
            }
        }
        let mut out = Vec::with_capacity(1 + 14 * self.lattice_ints.len());
        out.push(c as u64);
        let mut cols = Vec::with_capacity(8);
        for l in &self.lattice_ints {
            cols.clear();
            for v in l {
                let mut o = [0u64; 4];
                for (i, oi) in o.iter_mut().enumerate() {
                    let mut acc = 0u64;
                    for (j, &vj) in v.iter().enumerate() {
                        if vj != 0 && xs[i][j] != 0 {
                            acc = (acc + ring.mul(xs[i][j], vj % ring.m)) % ring.m;
                        }
                    }
                    *oi = acc;
                }
                cols.push(o);
            }
            hermite_form_mod(&ring, &mut cols, &mut out);
        }
        out
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.k.contains(g)
    }

    pub fn chi(&self, g: &GroupElement) -> Result<Complex64, Error> {
        self.chi.eval(&self.k, g)
    }

    /// `x⁻¹ y` when it lies in `K`.
    pub fn same_coset(&self, x: &GroupElement, y: &GroupElement) -> Option<GroupElement> {
        let k = x.inverse().mul(y);
        self.contains(&k).then_some(k)
    }
}

/// `K n K = ⊔_j x_j K` with `x_j = y_j n`, `y_j ∈ K`, weights `χ(y_j)`.
#[derive(Debug, Clone)]
pub struct CosetTable {
    pub base: GroupElement,
    pub reps: Vec<GroupElement>,
    pub ys: Vec<GroupElement>,
    pub weights: Vec<Complex64>,
    index: HashMap<Key, Vec<usize>>,
    /// First element `h ∈ K ∩ n K n⁻¹` with `χ(h) ≠ χ(n⁻¹ h n)`, if any.
    pub obstruction: Option<GroupElement>,
}

impl CosetTable {
    /// Orbit of `nK` under left multiplication by the generators of `K`. Every orbit edge
    /// landing on a known coset yields a Schreier generator `h = y_j⁻¹ s y_i` of
    /// `K ∩ n K n⁻¹`, on which `χ` and `χ ∘ Ad(n⁻¹)` are compared.
    pub fn build(setting: &Setting, n: &GroupElement) -> Result<Self, Error> {
        let mut table = CosetTable {
            base: n.clone(),
            reps: vec![n.clone()],
            ys: vec![GroupElement::identity()],
            weights: vec![Complex64::new(1.0, 0.0)],
            index: HashMap::new(),
            obstruction: None,
        };
        table.index.insert(setting.key(n), vec![0]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (s, cs) in setting.generators() {
                let x = s.mul(&table.reps[i]);
                let key = setting.key(&x);
                match table.find_keyed(setting, &key, &x) {
                    Some((j, k)) => {
                        if table.obstruction.is_none() {
                            let lhs = cs * table.weights[i];
                            let rhs = table.weights[j] * setting.chi(&k)?;
                            if (lhs - rhs).norm() > setting.tolerance {
                                let h = table.ys[j].inverse().mul(s).mul(&table.ys[i]);
                                table.obstruction = Some(h);
                            }
                        }
                    }
                    None => {
                        let j = table.reps.len();
                        if j >= setting.size_bound {
                            return Err(Error::SizeBound(setting.size_bound));
                        }
                        table.ys.push(s.mul(&table.ys[i]));
                        table.weights.push(cs * table.weights[i]);
                        table.reps.push(x);
                        table.index.entry(key).or_default().push(j);
                        queue.push_back(j);
                    }
                }
            }
        }
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Whether `K n K` carries a nonzero element of `H(K, χ)`.
    pub fn supports(&self) -> bool {
        self.obstruction.is_none()
    }

    /// [`CosetTable::find`] with a precomputed key.
    pub fn find_keyed(
        &self,
        setting: &Setting,
        key: &Key,
        x: &GroupElement,
    ) -> Option<(usize, GroupElement)> {
        let bucket = self.index.get(key)?;
        bucket
            .iter()
            .find_map(|&j| setting.same_coset(&self.reps[j], x).map(|k| (j, k)))
    }

    /// Index `j` and `k = x_j⁻¹ y ∈ K` with `y ∈ x_j K`, if `y ∈ K n K`.
    pub fn find(&self, setting: &Setting, y: &GroupElement) -> Option<(usize, GroupElement)> {
        self.find_keyed(setting, &setting.key(y), y)
    }
}

/// Left cosets of an arbitrary finite union, deduplicated.
#[derive(Debug, Clone, Default)]
pub struct CosetSet {
    pub reps: Vec<GroupElement>,
    index: HashMap<Key, Vec<usize>>,
}

impl CosetSet {
    /// Inserts `x K`, returning whether it was new.
    pub fn insert(&mut self, setting: &Setting, x: GroupElement) -> bool {
        let key = setting.key(&x);
        if let Some(b) = self.index.get(&key) {
            if b.iter()
                .any(|&j| setting.same_coset(&self.reps[j], &x).is_some())
            {
                return false;
            }
        }
        self.index.entry(key).or_default().push(self.reps.len());
        self.reps.push(x);
        true
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::{AffineRoot, DELTA, ETA};
    use crate::scalar::Prime;

    fn setting(p: u64, case: Case) -> Setting {
        Setting::weak(&Sp4::new(Prime::new(p).unwrap()), case, 1).unwrap()
    }

    #[test]
    fn fingerprint_lattices_are_found() {
        let s = setting(3, Case::Sl2Gl1);
        // L₀, (1,1,p,p)L₀, p + 1 lines and p + 1 hyperplanes
        assert_eq!(s.fingerprint_width(), 2 + 2 * 4);
        let strong = Setting::strong(s.sp(), Case::Sl2Gl1, Mu::trivial(), 1).unwrap();
        assert!(strong.fingerprint_width() < s.fingerprint_width());
    }

    #[test]
    fn key_is_right_invariant() {
        let s = setting(3, Case::Gl2);
        let n = s
            .sp()
            .n_of(&AffineRoot::new(DELTA.to_vec(), 0), &int(-1))
            .unwrap();
        let base = s.key(&n);
        for (g, _) in s.generators() {
            assert_eq!(s.key(&n.mul(g)), base);
        }
    }

    #[test]
    fn identity_table() {
        let s = setting(3, Case::Sl2Gl1);
        let t = CosetTable::build(&s, &GroupElement::identity()).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t.supports());
        assert_eq!(t.weights[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn n_delta_table_has_q_squared_cosets() {
        let s = setting(3, Case::Sl2Gl1);
        let sp = s.sp();
        let n = sp
            .n_of(&AffineRoot::new(DELTA.to_vec(), 0), &int(-1))
            .unwrap();
        let t = CosetTable::build(&s, &n).unwrap();
        assert_eq!(t.len(), 9);
        assert!(t.supports());
        // x_η(v) x_δ(u) n are representatives
        let mut set = CosetSet::default();
        for u in 0..3 {
            for v in 0..3 {
                let x = sp.x(ETA, &int(v)).mul(&sp.x(DELTA, &int(u))).mul(&n);
                assert!(t.find(&s, &x).is_some());
                assert!(set.insert(&s, x));
            }
        }
        assert_eq!(set.len(), 9);
    }
}
