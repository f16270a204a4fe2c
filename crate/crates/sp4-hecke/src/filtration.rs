//! Moy–Prasad groups at a point of the apartment, their abelian quotients and characters.
//!
//! A group is described by a valuation pattern: entry `(i, j)` off the diagonal carries
//! the root `w_i - w_j` and must have valuation at least the minimal level `k` with
//! `(w_i - w_j)(x) + k >= r` (strictly greater for the `⁺⁺` variant).

use std::collections::{HashMap, HashSet};
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::affine::{q, AffineRoot, Case, RootSystemC, ALPHA, BETA, DELTA, ETA, Q};
use crate::chevalley::{designated_entry, neg, GroupElement, Sp4, WEIGHTS};
use crate::scalar::{int, Prime, Scalar};
use crate::Error;

/// Torus contribution to a filtration group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TorusPart {
    /// `T(R)⁺`: diagonal entries congruent to 1.
    ProUnipotent,
    /// `T_ψ T(R)⁺` for `SL2xGL1` or `T_α T(R)⁺` for `GL2`.
    Extended(Case),
}

#[derive(Debug, Clone)]
pub struct FiltrationGroup {
    sp: Sp4,
    point: [Q; 2],
    depth: Q,
    strict: bool,
    torus: TorusPart,
    bounds: [[i64; 4]; 4],
}

fn root_between(i: usize, j: usize) -> [i64; 2] {
    [WEIGHTS[i][0] - WEIGHTS[j][0], WEIGHTS[i][1] - WEIGHTS[j][1]]
}

fn gradients() -> Vec<[i64; 2]> {
    RootSystemC::c2()
        .roots()
        .iter()
        .map(|r| [r[0], r[1]])
        .collect()
}

impl FiltrationGroup {
    /// `G(F)_{x, r}` (or `G(F)_{x, r⁺}` when `strict`), with the given torus part.
    pub fn build(
        sp: &Sp4,
        point: [Q; 2],
        depth: Q,
        strict: bool,
        torus: TorusPart,
    ) -> Result<Self, Error> {
        if depth <= Q::zero() || depth > Q::one() {
            return Err(Error::UnsupportedFiltration(format!("depth {depth}")));
        }
        if let TorusPart::Extended(_) = torus {
            if point != [q(1, 4), q(1, 4)] || depth != q(1, 2) || strict {
                return Err(Error::UnsupportedFiltration(
                    "extended torus only at (1/4, 1/4), depth 1/2".into(),
                ));
            }
        }
        let mut bounds = [[0i64; 4]; 4];
        for (i, row) in bounds.iter_mut().enumerate() {
            for (j, b) in row.iter_mut().enumerate() {
                if i != j {
                    *b = minimal_level(root_between(i, j), &point, depth, strict);
                }
            }
        }
        Ok(FiltrationGroup {
            sp: sp.clone(),
            point,
            depth,
            strict,
            torus,
            bounds,
        })
    }

    /// `K⁺` at `(1/4, 1/4)`, depth 1/2.
    pub fn k_plus(sp: &Sp4) -> Self {
        Self::build(
            sp,
            [q(1, 4), q(1, 4)],
            q(1, 2),
            false,
            TorusPart::ProUnipotent,
        )
        .unwrap()
    }

    /// `K⁺⁺` at `(1/4, 1/4)`, depth 1/2⁺.
    pub fn k_plus_plus(sp: &Sp4) -> Self {
        Self::build(
            sp,
            [q(1, 4), q(1, 4)],
            q(1, 2),
            true,
            TorusPart::ProUnipotent,
        )
        .unwrap()
    }

    /// `I⁺` at the barycenter `(3/8, 1/8)`, depth 1/4.
    pub fn i_plus(sp: &Sp4) -> Self {
        Self::build(
            sp,
            [q(3, 8), q(1, 8)],
            q(1, 4),
            false,
            TorusPart::ProUnipotent,
        )
        .unwrap()
    }

    pub fn i_plus_plus(sp: &Sp4) -> Self {
        Self::build(
            sp,
            [q(3, 8), q(1, 8)],
            q(1, 4),
            true,
            TorusPart::ProUnipotent,
        )
        .unwrap()
    }

    /// `K = T_ψ K⁺` or `T_α K⁺`.
    pub fn strong(sp: &Sp4, case: Case) -> Self {
        Self::build(
            sp,
            [q(1, 4), q(1, 4)],
            q(1, 2),
            false,
            TorusPart::Extended(case),
        )
        .unwrap()
    }

    pub fn sp(&self) -> &Sp4 {
        &self.sp
    }

    pub fn prime(&self) -> &Prime {
        self.sp.prime()
    }

    pub fn point(&self) -> &[Q; 2] {
        &self.point
    }

    pub fn depth(&self) -> Q {
        self.depth
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn torus(&self) -> TorusPart {
        self.torus
    }

    /// The pro-unipotent group with the same pattern.
    pub fn pro_unipotent(&self) -> Self {
        FiltrationGroup {
            torus: TorusPart::ProUnipotent,
            ..self.clone()
        }
    }

    /// Minimal level of the root subgroup with the given gradient.
    pub fn level(&self, grad: [i64; 2]) -> i64 {
        let (i, j) = designated_entry(grad);
        self.bounds[i][j]
    }

    /// Valuation bound on entry `(i, j)`, `i != j`.
    pub fn bound(&self, i: usize, j: usize) -> i64 {
        self.bounds[i][j]
    }

    /// The affine roots `γ + k_γ` generating the group together with its torus part.
    pub fn pattern(&self) -> Vec<AffineRoot> {
        gradients()
            .into_iter()
            .map(|g| AffineRoot::new(g.to_vec(), self.level(g)))
            .collect()
    }

    /// Affine roots of the pattern taking exactly the value `depth` at the point.
    pub fn simple_factors(&self) -> Vec<AffineRoot> {
        if self.strict {
            return Vec::new();
        }
        self.pattern()
            .into_iter()
            .filter(|r| r.eval(&self.point).unwrap() == self.depth)
            .collect()
    }

    fn unipotent_ok(&self, g: &GroupElement) -> bool {
        let p = self.prime();
        (0..4).all(|i| {
            (0..4).all(|j| {
                if i == j {
                    p.val_at_least(&(g.entry(i, i) - int(1)), 1)
                } else {
                    p.val_at_least(g.entry(i, j), self.bounds[i][j])
                }
            })
        })
    }

    /// Writes `g = t k` with `t` in the torus part modulo `T(R)⁺` and `k` in the
    /// pro-unipotent group; `None` when `g` is outside.
    pub fn split_torus(&self, g: &GroupElement) -> Option<(GroupElement, GroupElement)> {
        let p = self.prime();
        match self.torus {
            TorusPart::ProUnipotent => self
                .unipotent_ok(g)
                .then(|| (GroupElement::identity(), g.clone())),
            TorusPart::Extended(case) => {
                let a = g.entry(0, 0);
                let b = g.entry(1, 1);
                if !p.is_unit(a) || !p.is_unit(b) {
                    return None;
                }
                let t = match case {
                    Case::Sl2Gl1 => {
                        let eps = match p.residue(b).ok()? {
                            1 => int(1),
                            r if r == p.get() - 1 => int(-1),
                            _ => return None,
                        };
                        GroupElement::diag([a.clone(), eps.clone(), eps, a.recip()])
                    }
                    Case::Gl2 => self.sp.h(ALPHA, a),
                };
                let k = t.inverse().mul(g);
                self.unipotent_ok(&k).then_some((t, k))
            }
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.split_torus(g).is_some()
    }

    /// Topological generators: one element per root subgroup and the torus part.
    pub fn generators(&self) -> Vec<GroupElement> {
        let sp = &self.sp;
        let p = self.prime();
        let mut gens: Vec<GroupElement> = gradients()
            .into_iter()
            .map(|g| sp.x(g, &p.pow(self.level(g))))
            .collect();
        let one_p = int(1) + p.as_scalar();
        gens.push(sp.h(DELTA, &one_p));
        gens.push(sp.h(BETA, &one_p));
        if let TorusPart::Extended(case) = self.torus {
            let gen = int(p.generator() as i64);
            match case {
                Case::Sl2Gl1 => {
                    gens.push(sp.h(DELTA, &gen));
                    gens.push(sp.h(BETA, &int(-1)));
                }
                Case::Gl2 => gens.push(sp.h(ALPHA, &gen)),
            }
        }
        gens
    }

    /// Order of the image of the pro-unipotent group in `GL4(Z/p^e)`, from the pattern.
    pub fn pattern_order_mod(&self, e: u32) -> u128 {
        let p = self.prime().get() as u128;
        let mut exp: i64 = 2 * (e as i64 - 1);
        for i in 0..4 {
            for j in 0..4 {
                if i != j && designated_entry(root_between(i, j)) == (i, j) {
                    exp += (e as i64 - self.bounds[i][j]).max(0);
                }
            }
        }
        p.pow(exp as u32)
    }

    /// Whether a matrix mod `p^e` satisfies the pattern of the pro-unipotent group.
    pub fn contains_mod(&self, m: &[u8; 16], e: u32) -> bool {
        let p = self.prime().get() as u32;
        let val = |x: u32| -> u32 {
            if x == 0 {
                return e;
            }
            let mut v = 0;
            let mut x = x;
            while x.is_multiple_of(p) {
                x /= p;
                v += 1;
            }
            v
        };
        (0..4).all(|i| {
            (0..4).all(|j| {
                let x = m[4 * i + j] as u32;
                if i == j {
                    x % p == 1
                } else {
                    val(x) as i64 >= self.bounds[i][j].min(e as i64)
                }
            })
        })
    }

    /// Reduction of an integral element modulo `p^e`.
    pub fn reduce_mod(&self, g: &GroupElement, e: u32) -> Result<[u8; 16], Error> {
        let mut out = [0u8; 16];
        for i in 0..4 {
            for j in 0..4 {
                out[4 * i + j] = self.prime().reduce(g.entry(i, j), e)? as u8;
            }
        }
        Ok(out)
    }

    /// Closure of the generators in `GL4(Z/p^e)`, aborting past `limit` elements.
    pub fn closure_mod(&self, e: u32, limit: usize) -> Result<HashSet<[u8; 16]>, Error> {
        let modulus = (self.prime().get() as u32).pow(e);
        if modulus > 255 {
            return Err(Error::Invalid("modulus too large for byte matrices".into()));
        }
        let gens: Vec<[u8; 16]> = self
            .generators()
            .iter()
            .map(|g| self.reduce_mod(g, e))
            .collect::<Result<_, _>>()?;
        let mut id = [0u8; 16];
        for i in 0..4 {
            id[5 * i] = 1;
        }
        let mut seen = HashSet::with_capacity(1 << 16);
        seen.insert(id);
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = mul_mod(g, &x, modulus);
                if seen.insert(y) {
                    if seen.len() > limit {
                        return Err(Error::SizeBound(limit));
                    }
                    frontier.push(y);
                }
            }
        }
        Ok(seen)
    }

    /// Residues of `g` at the given factors: designated entry divided by `p^level`, mod p.
    pub fn coordinates_at(
        &self,
        factors: &[AffineRoot],
        g: &GroupElement,
    ) -> Result<Vec<u64>, Error> {
        let p = self.prime();
        factors
            .iter()
            .map(|f| {
                let (i, j) = designated_entry(f.grad2());
                p.residue(&(g.entry(i, j) / p.pow(f.level)))
            })
            .collect()
    }
}

fn minimal_level(grad: [i64; 2], point: &[Q; 2], depth: Q, strict: bool) -> i64 {
    let v = Q::from(grad[0]) * point[0] + Q::from(grad[1]) * point[1];
    let d = depth - v;
    if strict {
        d.floor().to_integer() + 1
    } else {
        d.ceil().to_integer()
    }
}

fn mul_mod(a: &[u8; 16], b: &[u8; 16], m: u32) -> [u8; 16] {
    let mut out = [0u8; 16];
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = 0u32;
            for k in 0..4 {
                acc += a[4 * i + k] as u32 * b[4 * k + j] as u32;
            }
            out[4 * i + j] = (acc % m) as u8;
        }
    }
    out
}

/// The pair `K⁺ ⊇ K⁺⁺` with the coordinates of the abelian quotient.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub upper: FiltrationGroup,
    pub lower: FiltrationGroup,
    pub factors: Vec<AffineRoot>,
}

impl Quotient {
    pub fn new(upper: FiltrationGroup, lower: FiltrationGroup) -> Self {
        let factors = upper
            .pattern()
            .into_iter()
            .filter(|r| r.level < lower.level(r.grad2()))
            .collect();
        Quotient {
            upper,
            lower,
            factors,
        }
    }

    /// `K⁺ / K⁺⁺` at `(1/4, 1/4)`; factors ordered `β, δ, η, 1-β, 1-δ, 1-η`.
    pub fn k_plus(sp: &Sp4) -> Self {
        let mut out = Self::new(
            FiltrationGroup::k_plus(sp),
            FiltrationGroup::k_plus_plus(sp),
        );
        out.factors = standard_factors();
        out
    }

    pub fn coordinates(&self, g: &GroupElement) -> Result<Vec<u64>, Error> {
        if !self.upper.contains(g) {
            return Err(Error::NotInGroup);
        }
        self.upper.coordinates_at(&self.factors, g)
    }

    /// Number of cosets `x K⁺⁺` reached from `K⁺⁺` by left multiplication with the
    /// generators of `K⁺`, computed in `GL4(Z/p²)`: every level bound of `K⁺⁺` is at most 2.
    /// Cosets are keyed by coordinates and every collision is confirmed by `x⁻¹ y ∈ K⁺⁺`.
    pub fn orbit_order(&self, limit: usize) -> Result<usize, Error> {
        let p = self.upper.prime().get() as u32;
        let modulus = p * p;
        if modulus > 255 || (0..4).any(|i| (0..4).any(|j| i != j && self.lower.bound(i, j) > 2)) {
            return Err(Error::Invalid("quotient not visible mod p²".into()));
        }
        let gens: Vec<([u8; 16], [u8; 16])> = self
            .upper
            .generators()
            .iter()
            .map(|g| {
                Ok((
                    self.upper.reduce_mod(g, 2)?,
                    self.upper.reduce_mod(&g.inverse(), 2)?,
                ))
            })
            .collect::<Result<_, Error>>()?;
        let coords = |m: &[u8; 16]| -> Vec<u32> {
            self.factors
                .iter()
                .map(|f| {
                    let (i, j) = designated_entry(f.grad2());
                    m[4 * i + j] as u32 / p.pow(f.level as u32) % p
                })
                .collect()
        };
        let mut id = [0u8; 16];
        for i in 0..4 {
            id[5 * i] = 1;
        }
        let mut reps: HashMap<Vec<u32>, ([u8; 16], [u8; 16])> = HashMap::new();
        reps.insert(coords(&id), (id, id));
        let mut queue = vec![(id, id)];
        while let Some((x, xi)) = queue.pop() {
            for (s, si) in &gens {
                let y = mul_mod(s, &x, modulus);
                let c = coords(&y);
                match reps.get(&c) {
                    Some((_, ri)) => {
                        if !self.lower.contains_mod(&mul_mod(ri, &y, modulus), 2) {
                            return Err(Error::Invalid(
                                "coordinates do not separate cosets".into(),
                            ));
                        }
                    }
                    None => {
                        if reps.len() >= limit {
                            return Err(Error::SizeBound(limit));
                        }
                        let yi = mul_mod(&xi, si, modulus);
                        reps.insert(c, (y, yi));
                        queue.push((y, yi));
                    }
                }
            }
        }
        Ok(reps.len())
    }
}

/// The six factors of `K⁺/K⁺⁺` at `(1/4, 1/4)`.
pub fn standard_factors() -> Vec<AffineRoot> {
    let r = |g: [i64; 2]| AffineRoot::new(g.to_vec(), 0);
    vec![
        r(BETA),
        r(DELTA),
        r(ETA),
        r(BETA).negate_plus(1),
        r(DELTA).negate_plus(1),
        r(ETA).negate_plus(1),
    ]
}

/// Indices into `standard_factors` of the two factors a case's character sees.
pub fn active_factors(case: Case) -> [usize; 2] {
    match case {
        Case::Sl2Gl1 => [0, 3],
        Case::Gl2 => [2, 5],
    }
}

/// A character of `F_p^×`, `u ↦ exp(2πi · exponent · log_g(u) / (p-1))`, placed on
/// `T_δ` (first case) or `T_α` (second case); `z_sign` is its value on `h_β(-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mu {
    pub exponent: u64,
    pub z_sign: i8,
}

impl Mu {
    pub fn trivial() -> Self {
        Mu {
            exponent: 0,
            z_sign: 1,
        }
    }

    pub fn legendre(p: &Prime) -> Self {
        Mu {
            exponent: (p.get() - 1) / 2,
            z_sign: 1,
        }
    }

    pub fn is_quadratic(&self, p: &Prime) -> bool {
        (2 * self.exponent).is_multiple_of(p.get() - 1) && self.z_sign.abs() == 1
    }

    pub fn is_trivial_on_units(&self, p: &Prime) -> bool {
        self.exponent.is_multiple_of(p.get() - 1)
    }

    /// Value at a unit, read through its residue.
    pub fn at(&self, p: &Prime, u: &Scalar) -> Result<Complex64, Error> {
        if !p.is_unit(u) {
            return Err(Error::NotUnit);
        }
        let r = p.residue(u)?;
        let k = (self.exponent * p.dlog(r)) % (p.get() - 1);
        Ok(root_of_unity(k, p.get() - 1))
    }
}

pub fn root_of_unity(k: u64, n: u64) -> Complex64 {
    let k = k % n;
    // exact values where they exist keep products of signs exact
    match (2 * k).cmp(&n) {
        _ if k == 0 => Complex64::new(1.0, 0.0),
        std::cmp::Ordering::Equal => Complex64::new(-1.0, 0.0),
        _ => Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64),
    }
}

/// `χ = μ ⊗ ψ` on `K`, with `ψ(k) = ζ^{Σ m_f c_f(k)}` over the six quotient coordinates.
#[derive(Debug, Clone)]
pub struct Character {
    case: Case,
    multipliers: [u64; 6],
    mu: Mu,
    prime: Prime,
}

impl Character {
    /// Multipliers `m1, m2` on the two active factors of the case.
    pub fn new(sp: &Sp4, case: Case, m1: u64, m2: u64, mu: Mu) -> Result<Self, Error> {
        let p = sp.prime().get();
        if m1.is_multiple_of(p) || m2.is_multiple_of(p) {
            return Err(Error::Invalid("multipliers must be nonzero mod p".into()));
        }
        let mut multipliers = [0; 6];
        let [a, b] = active_factors(case);
        multipliers[a] = m1 % p;
        multipliers[b] = m2 % p;
        Ok(Character {
            case,
            multipliers,
            mu,
            prime: sp.prime().clone(),
        })
    }

    /// The character with multiplier `m` on the first active factor and the second
    /// multiplier fixed by invariance under the strip generators.
    pub fn normalized(sp: &Sp4, case: Case, m: u64, mu: Mu) -> Result<Self, Error> {
        let p = sp.prime();
        let m2 = match case {
            Case::Sl2Gl1 => m,
            Case::Gl2 => {
                // n x_η(1) n⁻¹ = x_{1-η}(c): invariance needs m₂ c = m
                let n = gl2_n(sp);
                let c = n.mul(&sp.x(ETA, &int(1))).mul(&n.inverse());
                let (i, j) = designated_entry(neg(ETA));
                let c = p.residue(&(c.entry(i, j) / p.as_scalar()))?;
                if c == 0 {
                    return Err(Error::Invalid("conjugate lost the factor".into()));
                }
                m % p.get() * mod_inv(c, p.get()) % p.get()
            }
        };
        Self::new(sp, case, m, m2, mu)
    }

    pub fn case(&self) -> Case {
        self.case
    }

    pub fn mu(&self) -> Mu {
        self.mu
    }

    pub fn multipliers(&self) -> [u64; 6] {
        self.multipliers
    }

    pub fn prime(&self) -> &Prime {
        &self.prime
    }

    /// `ψ` at a vector of quotient coordinates.
    pub fn psi_coords(&self, coords: &[u64]) -> Complex64 {
        let p = self.prime.get();
        let s = coords
            .iter()
            .zip(self.multipliers.iter())
            .fold(0, |acc, (c, m)| (acc + c * m) % p);
        root_of_unity(s, p)
    }

    /// `μ` at a torus element of `T_ψ` or `T_α`.
    pub fn mu_torus(&self, t: &GroupElement) -> Result<Complex64, Error> {
        let p = &self.prime;
        let a = t.entry(0, 0);
        let b = t.entry(1, 1);
        let base = self.mu.at(p, a)?;
        match self.case {
            Case::Sl2Gl1 => match p.residue(b)? {
                1 => Ok(base),
                r if r == p.get() - 1 => Ok(base * self.mu.z_sign as f64),
                _ => Err(Error::NotInGroup),
            },
            Case::Gl2 => {
                if p.residue(&(a * b))? != 1 {
                    return Err(Error::NotInGroup);
                }
                Ok(base)
            }
        }
    }

    /// `χ(g)` for `g` in `K`; the torus part contributes only when `K` has one.
    pub fn eval(&self, k: &FiltrationGroup, g: &GroupElement) -> Result<Complex64, Error> {
        let (t, rest) = k.split_torus(g).ok_or(Error::NotInGroup)?;
        let coords = k.coordinates_at(&standard_factors(), &rest)?;
        let mu = if t.is_identity() {
            Complex64::new(1.0, 0.0)
        } else {
            self.mu_torus(&t)?
        };
        Ok(mu * self.psi_coords(&coords))
    }
}

/// `n = n_δ(-1) n_{1-β}(-1)`, realizing `w_δ w_{1-β}`.
pub fn gl2_n(sp: &Sp4) -> GroupElement {
    let one = int(-1);
    let nd = sp.n_of(&AffineRoot::new(DELTA.to_vec(), 0), &one).unwrap();
    let nb = sp
        .n_of(&AffineRoot::new(BETA.to_vec(), 0).negate_plus(1), &one)
        .unwrap();
    nd.mul(&nb)
}

/// Strong group `K` and `χ = μ ⊗ ψ` on it, rejecting characters that are not quadratic.
pub fn build_strong_k(
    sp: &Sp4,
    case: Case,
    mu: Mu,
    multiplier: u64,
) -> Result<(FiltrationGroup, Character), Error> {
    if !mu.is_quadratic(sp.prime()) {
        return Err(Error::NotQuadratic);
    }
    let k = FiltrationGroup::strong(sp, case);
    let chi = Character::normalized(sp, case, multiplier, mu)?;
    Ok((k, chi))
}

pub(crate) fn mod_inv(a: u64, p: u64) -> u64 {
    let mut r = 1;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::commutator;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sp(p: u64) -> Sp4 {
        Sp4::new(Prime::new(p).unwrap())
    }

    fn root(g: [i64; 2], k: i64) -> AffineRoot {
        AffineRoot::new(g.to_vec(), k)
    }

    /// Random element of `K⁺` as a product of generator powers.
    fn random_element(k: &FiltrationGroup, rng: &mut ChaCha8Rng, len: usize) -> GroupElement {
        let gens = k.generators();
        let mut g = GroupElement::identity();
        for _ in 0..len {
            let s = &gens[rng.gen_range(0..gens.len())];
            g = g.mul(s);
        }
        g
    }

    #[test]
    fn k_plus_pattern() {
        let s = sp(3);
        let kp = FiltrationGroup::k_plus(&s);
        let levels: Vec<i64> = [ALPHA, BETA, DELTA, ETA]
            .iter()
            .flat_map(|&g| [kp.level(g), kp.level(neg(g))])
            .collect();
        assert_eq!(levels, vec![1, 1, 0, 1, 0, 1, 0, 1]);
        let kpp = FiltrationGroup::k_plus_plus(&s);
        let levels: Vec<i64> = [ALPHA, BETA, DELTA, ETA]
            .iter()
            .flat_map(|&g| [kpp.level(g), kpp.level(neg(g))])
            .collect();
        assert_eq!(levels, vec![1, 1, 1, 2, 1, 2, 1, 2]);
        let mut f = kp.simple_factors();
        f.sort();
        let mut expected = standard_factors();
        expected.sort();
        assert_eq!(f, expected);
    }

    #[test]
    fn i_plus_factors() {
        let ip = FiltrationGroup::i_plus(&sp(3));
        let mut f = ip.simple_factors();
        f.sort();
        let mut expected = vec![root(ALPHA, 0), root(BETA, 0), root(DELTA, 0).negate_plus(1)];
        expected.sort();
        assert_eq!(f, expected);
    }

    #[test]
    fn membership_examples() {
        let s = sp(3);
        let kp = FiltrationGroup::k_plus(&s);
        assert!(kp.contains(&GroupElement::identity()));
        assert!(kp.contains(&s.x_affine(&root(BETA, 0), &int(1)).unwrap()));
        assert!(!kp.contains(&s.x_affine(&root(ALPHA, 0), &int(1)).unwrap()));
        assert!(kp.contains(&s.x_affine(&root(ALPHA, 1), &int(1)).unwrap()));
        let kpp = FiltrationGroup::k_plus_plus(&s);
        assert!(!kpp.contains(&s.x(BETA, &int(1))));
        for g in kpp.generators() {
            assert!(kp.contains(&g));
        }
        assert!(!kp.contains(&s.h(DELTA, &int(2))));
        let strong = FiltrationGroup::strong(&s, Case::Sl2Gl1);
        assert!(strong.contains(&s.h(DELTA, &int(2))));
        assert!(strong.contains(&s.h(BETA, &int(-1))));
        assert!(!FiltrationGroup::strong(&s, Case::Gl2).contains(&s.h(BETA, &int(-1))));
    }

    #[test]
    fn unsupported_filtrations() {
        let s = sp(3);
        let p = [q(1, 4), q(1, 4)];
        assert!(FiltrationGroup::build(&s, p, q(0, 1), false, TorusPart::ProUnipotent).is_err());
        assert!(
            FiltrationGroup::build(&s, p, q(1, 4), false, TorusPart::Extended(Case::Gl2)).is_err()
        );
    }

    #[test]
    fn closure_matches_pattern_small() {
        let s = sp(3);
        for g in [
            FiltrationGroup::k_plus_plus(&s),
            FiltrationGroup::i_plus_plus(&s),
        ] {
            let closure = g.closure_mod(2, 1 << 20).unwrap();
            assert_eq!(closure.len() as u128, g.pattern_order_mod(2));
            assert!(closure.iter().all(|m| g.contains_mod(m, 2)));
        }
        assert_eq!(
            FiltrationGroup::k_plus_plus(&s).pattern_order_mod(2),
            3u128.pow(7)
        );
        assert_eq!(
            FiltrationGroup::k_plus(&s).pattern_order_mod(2),
            3u128.pow(13)
        );
    }

    #[test]
    fn normality_and_commutators() {
        for p in [3, 5] {
            let s = sp(p);
            let kp = FiltrationGroup::k_plus(&s);
            let kpp = FiltrationGroup::k_plus_plus(&s);
            for g in kp.generators() {
                let gi = g.inverse();
                for k in kpp.generators() {
                    assert!(kpp.contains(&g.mul(&k).mul(&gi)));
                }
                for h in kp.generators() {
                    assert!(kpp.contains(&commutator(&g, &h)));
                }
            }
        }
    }

    #[test]
    fn quotient_orbit_has_six_factors() {
        let q = Quotient::k_plus(&sp(3));
        assert_eq!(q.orbit_order(1 << 12).unwrap(), 3usize.pow(6));
    }

    #[test]
    fn coordinates_examples() {
        let s = sp(5);
        let quo = Quotient::k_plus(&s);
        let c = quo.coordinates(&s.x(BETA, &int(3))).unwrap();
        assert_eq!(c, vec![3, 0, 0, 0, 0, 0]);
        let c = quo
            .coordinates(&s.x_affine(&root(ETA, 0).negate_plus(1), &int(2)).unwrap())
            .unwrap();
        assert_eq!(c, vec![0, 0, 0, 0, 0, 2]);
        for g in quo.lower.generators() {
            assert_eq!(quo.coordinates(&g).unwrap(), vec![0; 6]);
        }
        assert!(quo.coordinates(&s.x(ALPHA, &int(1))).is_err());
        let derived = Quotient::new(quo.upper.clone(), quo.lower.clone());
        let mut a = derived.factors.clone();
        a.sort();
        let mut b = standard_factors();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn coordinates_are_additive() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [3, 5] {
            let s = sp(p);
            let quo = Quotient::k_plus(&s);
            for _ in 0..100 {
                let g = random_element(&quo.upper, &mut rng, 6);
                let h = random_element(&quo.upper, &mut rng, 6);
                let cg = quo.coordinates(&g).unwrap();
                let ch = quo.coordinates(&h).unwrap();
                let sum: Vec<u64> = cg.iter().zip(&ch).map(|(a, b)| (a + b) % p).collect();
                assert_eq!(quo.coordinates(&g.mul(&h)).unwrap(), sum);
            }
        }
    }

    #[test]
    fn character_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [3, 5] {
            let s = sp(p);
            for case in [Case::Sl2Gl1, Case::Gl2] {
                let (k, chi) = build_strong_k(&s, case, Mu::legendre(s.prime()), 1).unwrap();
                let kpp = FiltrationGroup::k_plus_plus(&s);
                for _ in 0..200 {
                    let g = random_element(&k, &mut rng, 5);
                    let h = random_element(&k, &mut rng, 5);
                    let lhs = chi.eval(&k, &g.mul(&h)).unwrap();
                    let rhs = chi.eval(&k, &g).unwrap() * chi.eval(&k, &h).unwrap();
                    assert!((lhs - rhs).norm() < 1e-9);
                }
                for _ in 0..50 {
                    let g = random_element(&k, &mut rng, 5);
                    let z = random_element(&kpp, &mut rng, 5);
                    assert!((chi.eval(&k, &z).unwrap() - 1.0).norm() < 1e-9);
                    let diff = chi.eval(&k, &g.mul(&z)).unwrap() - chi.eval(&k, &g).unwrap();
                    assert!(diff.norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn strong_k_examples() {
        let s = sp(3);
        let (k, chi) = build_strong_k(&s, Case::Sl2Gl1, Mu::legendre(s.prime()), 1).unwrap();
        let v = chi.eval(&k, &s.h(DELTA, &int(-1))).unwrap();
        assert!((v + 1.0).norm() < 1e-12);
        let (k, chi) = build_strong_k(&s, Case::Gl2, Mu::trivial(), 1).unwrap();
        assert!((chi.eval(&k, &s.h(ALPHA, &int(-1))).unwrap() - 1.0).norm() < 1e-12);
        let s7 = sp(7);
        let cubic = Mu {
            exponent: 2,
            z_sign: 1,
        };
        assert_eq!(
            build_strong_k(&s7, Case::Sl2Gl1, cubic, 1).unwrap_err(),
            Error::NotQuadratic
        );
    }

    #[test]
    fn trivial_mu_restricts_to_psi() {
        let s = sp(5);
        let (k, chi) = build_strong_k(&s, Case::Sl2Gl1, Mu::trivial(), 2).unwrap();
        let kp = FiltrationGroup::k_plus(&s);
        let psi = Character::new(&s, Case::Sl2Gl1, 2, 2, Mu::trivial()).unwrap();
        for g in kp.generators() {
            assert!((chi.eval(&k, &g).unwrap() - psi.eval(&kp, &g).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn gl2_normalization_is_symmetric() {
        for p in [3, 5] {
            let s = sp(p);
            let (k, chi) = build_strong_k(&s, Case::Gl2, Mu::trivial(), 1).unwrap();
            for a in 0..p as i64 {
                let x = s.x_affine(&root(ETA, 0), &int(a)).unwrap();
                let y = s.x_affine(&root(ETA, 0).negate_plus(1), &int(a)).unwrap();
                assert!((chi.eval(&k, &x).unwrap() - chi.eval(&k, &y).unwrap()).norm() < 1e-9);
            }
        }
    }
}
