//! `Sp(4)` as exact 4×4 matrices with a fixed pinning.
//!
//! The Gram matrix is `J = antidiag(1, 1, -1, -1)`, the torus is `diag(t1, t2, 1/t2, 1/t1)`
//! and basis vector `k` has weight `e1, e2, -e2, -e1`. Every root occupies single entries:
//! `x_α(u)` has `u` at (1,2) and `-u` at (3,4), `x_β(u)` has `u` at (2,3), `x_δ(u)` has `u`
//! at (1,4) and `x_η(u)` has `u` at (1,3) and (2,4) (one-based). Negative roots are transposes.

use std::fmt;

use num_traits::{One, Zero};

use crate::affine::{AffineRoot, AffineWeylElement, ALPHA, BETA, DELTA, ETA};
use crate::scalar::{int, Prime, Scalar};
use crate::Error;

pub type Mat = [[Scalar; 4]; 4];

/// Weights of the four basis vectors.
pub const WEIGHTS: [[i64; 2]; 4] = [[1, 0], [0, 1], [0, -1], [-1, 0]];

const J_SIGN: [i64; 4] = [1, 1, -1, -1];

/// An element of `Sp(4, Q)` viewed inside `Sp(4, Q_p)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    m: Mat,
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for row in &self.m {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  {}", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl GroupElement {
    pub fn identity() -> Self {
        let mut m: Mat = Default::default();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Scalar::one();
        }
        GroupElement { m }
    }

    /// Wraps a matrix, checking `MᵀJM = J`.
    pub fn from_matrix(m: Mat) -> Result<Self, Error> {
        let g = GroupElement { m };
        if g.is_symplectic() {
            Ok(g)
        } else {
            Err(Error::Invalid("matrix is not symplectic".into()))
        }
    }

    pub(crate) fn from_matrix_unchecked(m: Mat) -> Self {
        GroupElement { m }
    }

    pub fn diag(t: [Scalar; 4]) -> Self {
        let mut g = Self::identity();
        for (i, x) in t.into_iter().enumerate() {
            g.m[i][i] = x;
        }
        g
    }

    pub fn matrix(&self) -> &Mat {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.m[i][j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut m: Mat = Default::default();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = Scalar::zero();
                for k in 0..4 {
                    if !self.m[i][k].is_zero() && !other.m[k][j].is_zero() {
                        acc += &self.m[i][k] * &other.m[k][j];
                    }
                }
                m[i][j] = acc;
            }
        }
        GroupElement { m }
    }

    /// One entry of `self * other`.
    pub fn mul_entry(&self, other: &Self, i: usize, j: usize) -> Scalar {
        let mut acc = Scalar::zero();
        for k in 0..4 {
            if !self.m[i][k].is_zero() && !other.m[k][j].is_zero() {
                acc += &self.m[i][k] * &other.m[k][j];
            }
        }
        acc
    }

    /// `M⁻¹ = J⁻¹ Mᵀ J`, entrywise `s_i s_j M[3-j][3-i]`.
    pub fn inverse(&self) -> Self {
        let mut m: Mat = Default::default();
        for i in 0..4 {
            for j in 0..4 {
                let x = &self.m[3 - j][3 - i];
                m[i][j] = if J_SIGN[i] * J_SIGN[j] == 1 {
                    x.clone()
                } else {
                    -x
                };
            }
        }
        GroupElement { m }
    }

    pub fn is_symplectic(&self) -> bool {
        self.mul(&self.inverse()) == Self::identity()
    }

    pub fn det(&self) -> Scalar {
        let mut a = self.m.clone();
        let mut det = Scalar::one();
        for c in 0..4 {
            let Some(p) = (c..4).find(|&r| !a[r][c].is_zero()) else {
                return Scalar::zero();
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det *= &a[c][c];
            for r in c + 1..4 {
                if !a[r][c].is_zero() {
                    let f = &a[r][c] / &a[c][c];
                    for k in c..4 {
                        let t = &a[c][k] * &f;
                        a[r][k] -= t;
                    }
                }
            }
        }
        det
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| i == j || self.m[i][j].is_zero()))
    }

    /// Row holding the single nonzero entry of each column, if the matrix is monomial.
    pub fn monomial_rows(&self) -> Option<[usize; 4]> {
        let mut rows = [0; 4];
        let mut used = [false; 4];
        for (j, slot) in rows.iter_mut().enumerate() {
            let nz: Vec<usize> = (0..4).filter(|&i| !self.m[i][j].is_zero()).collect();
            if nz.len() != 1 || used[nz[0]] {
                return None;
            }
            used[nz[0]] = true;
            *slot = nz[0];
        }
        Some(rows)
    }

    /// Image in the affine Weyl group of a monomial matrix, with the convention
    /// `n U_ψ n⁻¹ = U_{w·ψ}`.
    pub fn weyl_image(&self, p: &Prime) -> Result<AffineWeylElement, Error> {
        let rows = self.monomial_rows().ok_or(Error::NotMonomial)?;
        let mut linear = vec![vec![0; 2]; 2];
        for j in 0..2 {
            let w = WEIGHTS[rows[j]];
            linear[0][j] = w[0];
            linear[1][j] = w[1];
        }
        let mut translation = vec![0; 2];
        for (a, t) in translation.iter_mut().enumerate() {
            let col = (0..4).find(|&j| rows[j] == a).expect("monomial");
            *t = -p.valuation(&self.m[a][col]).expect("nonzero");
        }
        Ok(AffineWeylElement {
            linear,
            translation,
        })
    }
}

pub fn commutator(g: &GroupElement, h: &GroupElement) -> GroupElement {
    g.mul(h).mul(&g.inverse()).mul(&h.inverse())
}

/// A 2×2 block of a pinning: rows/columns `(i, j)`, sign on the off-diagonal entries.
type Block = (usize, usize, i64);

fn blocks(grad: [i64; 2]) -> &'static [Block] {
    match grad {
        ALPHA => &[(0, 1, 1), (2, 3, -1)],
        BETA => &[(1, 2, 1)],
        DELTA => &[(0, 3, 1)],
        ETA => &[(0, 2, 1), (1, 3, 1)],
        _ => panic!("not a positive root of C2: {grad:?}"),
    }
}

pub fn is_positive(grad: [i64; 2]) -> bool {
    matches!(grad, ALPHA | BETA | DELTA | ETA)
}

pub fn neg(grad: [i64; 2]) -> [i64; 2] {
    [-grad[0], -grad[1]]
}

/// Matrix entry read as the coordinate of a root subgroup: `x_γ(u)` has `u` there.
pub fn designated_entry(grad: [i64; 2]) -> (usize, usize) {
    if is_positive(grad) {
        let (i, j, _) = blocks(grad)[0];
        (i, j)
    } else {
        let (i, j, _) = blocks(neg(grad))[0];
        (j, i)
    }
}

/// A 2×2 matrix `[[a, b], [c, d]]`.
pub type Two = [[Scalar; 2]; 2];

/// Root data and the pinning `φ_γ : SL2 -> K_γ`.
#[derive(Debug, Clone)]
pub struct Sp4 {
    prime: Prime,
}

impl Sp4 {
    pub fn new(prime: Prime) -> Self {
        Sp4 { prime }
    }

    pub fn prime(&self) -> &Prime {
        &self.prime
    }

    /// `φ_γ(g)`, with `φ_{-γ}(g) = φ_γ(A g A)` for `A` the 2×2 swap.
    pub fn phi(&self, grad: [i64; 2], g: &Two) -> GroupElement {
        if !is_positive(grad) {
            let swapped = [
                [g[1][1].clone(), g[1][0].clone()],
                [g[0][1].clone(), g[0][0].clone()],
            ];
            return self.phi(neg(grad), &swapped);
        }
        let mut out = GroupElement::identity();
        for &(i, j, s) in blocks(grad) {
            let sgn = |x: &Scalar| if s == 1 { x.clone() } else { -x };
            out.m[i][i] = g[0][0].clone();
            out.m[i][j] = sgn(&g[0][1]);
            out.m[j][i] = sgn(&g[1][0]);
            out.m[j][j] = g[1][1].clone();
        }
        out
    }

    /// Inverse of `phi` on its image, for positive gradients.
    fn unphi(&self, grad: [i64; 2], m: &GroupElement) -> Option<Two> {
        let (i, j, s) = blocks(grad)[0];
        let sgn = |x: &Scalar| if s == 1 { x.clone() } else { -x };
        let g = [
            [m.m[i][i].clone(), sgn(&m.m[i][j])],
            [sgn(&m.m[j][i]), m.m[j][j].clone()],
        ];
        (self.phi(grad, &g) == *m).then_some(g)
    }

    pub fn x(&self, grad: [i64; 2], u: &Scalar) -> GroupElement {
        self.phi(grad, &[[int(1), u.clone()], [int(0), int(1)]])
    }

    pub fn n(&self, grad: [i64; 2], u: &Scalar) -> GroupElement {
        self.phi(grad, &[[int(0), u.clone()], [-u.recip(), int(0)]])
    }

    pub fn h(&self, grad: [i64; 2], u: &Scalar) -> GroupElement {
        self.phi(grad, &[[u.clone(), int(0)], [int(0), u.recip()]])
    }

    /// `x_{γ+k}(u) = x_γ(p^k u)`.
    pub fn x_affine(&self, psi: &AffineRoot, u: &Scalar) -> Result<GroupElement, Error> {
        if !self.prime.val_at_least(u, 0) {
            return Err(Error::NegativeValuation);
        }
        Ok(self.x(psi.grad2(), &(self.prime.pow(psi.level) * u)))
    }

    /// `n_{γ+k}(u) = x_{-γ-k}(-u⁻¹) x_{γ+k}(u) x_{-γ-k}(-u⁻¹) = n_γ(p^k u)`.
    pub fn n_of(&self, psi: &AffineRoot, u: &Scalar) -> Result<GroupElement, Error> {
        if !self.prime.is_unit(u) {
            return Err(Error::NotUnit);
        }
        Ok(self.n(psi.grad2(), &(self.prime.pow(psi.level) * u)))
    }

    /// `h_{γ+k}(u) = n_{γ+k}(u) n_{γ+k}(-1)`; independent of the level.
    pub fn h_of(&self, grad: [i64; 2], u: &Scalar) -> Result<GroupElement, Error> {
        if !self.prime.is_unit(u) {
            return Err(Error::NotUnit);
        }
        Ok(self.h(grad, u))
    }

    /// Monomial representative of a Weyl element: a signed permutation times `diag(p^-t)`.
    pub fn weyl_lift(&self, w: &AffineWeylElement) -> GroupElement {
        let mut m: Mat = Default::default();
        for j in 0..4 {
            let wj = WEIGHTS[j];
            let img = [
                w.linear[0][0] * wj[0] + w.linear[0][1] * wj[1],
                w.linear[1][0] * wj[0] + w.linear[1][1] * wj[1],
            ];
            let i = WEIGHTS
                .iter()
                .position(|x| *x == img)
                .expect("signed permutation");
            // columns 3, 4 carry the signs that make MᵀJM = J
            m[i][j] = if j < 2 {
                int(1)
            } else {
                int(J_SIGN[j] * J_SIGN[i])
            };
        }
        let t = &w.translation;
        let d = GroupElement::diag([
            self.prime.pow(-t[0]),
            self.prime.pow(-t[1]),
            self.prime.pow(t[1]),
            self.prime.pow(t[0]),
        ]);
        d.mul(&GroupElement { m })
    }

    /// Unit constants in `[x_{-α}(v), x_δ(u)] = x_β(a v² u) x_η(b v u)` and
    /// `[x_α(v), x_{1-δ}(u)] = x_{1-β}(a' v² u) x_{1-η}(b' v u)`.
    pub fn commutator_constants(&self) -> CommutatorConstants {
        let one = int(1);
        let c = commutator(&self.x(neg(ALPHA), &one), &self.x(DELTA, &one));
        let a = c.entry(1, 2).clone();
        let b = c.entry(0, 2).clone();
        let c = commutator(
            &self.x(ALPHA, &one),
            &self.x(neg(DELTA), &self.prime.as_scalar()),
        );
        let p = self.prime.as_scalar();
        let a1 = c.entry(2, 1) / &p;
        let b1 = c.entry(2, 0) / &p;
        CommutatorConstants { a, b, a1, b1 }
    }

    /// Predicted containment for `[U_γ, U_γ']`.
    pub fn classify_commutator(&self, g1: &AffineRoot, g2: &AffineRoot) -> CommutatorRule {
        let a = g1.grad2();
        let b = g2.grad2();
        if a == b {
            return CommutatorRule::Parallel;
        }
        if a == neg(b) {
            let k = g1.level + g2.level;
            if k > 0 {
                return CommutatorRule::Opposite {
                    predicted: vec![g1.shift(1), g2.shift(1)],
                };
            }
            return CommutatorRule::OppositeNonPositive;
        }
        let c2 = crate::affine::RootSystemC::c2();
        let mut predicted: Vec<AffineRoot> = Vec::new();
        for i in 1..=3 {
            for j in 1..=3 {
                let g = [i * a[0] + j * b[0], i * a[1] + j * b[1]];
                if c2.is_root(&g) {
                    let lvl = i * g1.level + j * g2.level;
                    match predicted.iter_mut().find(|r| r.grad2() == g) {
                        Some(r) => r.level = r.level.min(lvl),
                        None => predicted.push(AffineRoot::new(g.to_vec(), lvl)),
                    }
                }
            }
        }
        CommutatorRule::Generic { predicted, a, b }
    }

    /// Membership of `g` in the group predicted by `rule`.
    pub fn in_predicted(&self, rule: &CommutatorRule, g: &GroupElement) -> Option<bool> {
        match rule {
            CommutatorRule::Parallel => Some(g.is_identity()),
            CommutatorRule::OppositeNonPositive => None,
            CommutatorRule::Opposite { predicted } => Some(self.in_opposite_group(predicted, g)),
            CommutatorRule::Generic { predicted, a, b } => {
                Some(self.in_unipotent_product(predicted, *a, *b, g))
            }
        }
    }

    /// `U_{γ1} U_{γ2} T_γ⁺` for opposite gradients inside one `SL2`.
    fn in_opposite_group(&self, roots: &[AffineRoot], g: &GroupElement) -> bool {
        let (pos, negr) = if is_positive(roots[0].grad2()) {
            (&roots[0], &roots[1])
        } else {
            (&roots[1], &roots[0])
        };
        let Some(m) = self.unphi(pos.grad2(), g) else {
            return false;
        };
        let p = &self.prime;
        p.val_at_least(&m[0][1], pos.level)
            && p.val_at_least(&m[1][0], negr.level)
            && p.val_at_least(&(&m[0][0] - int(1)), 1)
            && p.val_at_least(&(&m[1][1] - int(1)), 1)
    }

    /// `Π U_ψ` over `roots`, all positive combinations of the gradients `a`, `b`.
    /// Peels factors in increasing height; the lowest factor alone fills its entry.
    fn in_unipotent_product(
        &self,
        roots: &[AffineRoot],
        a: [i64; 2],
        b: [i64; 2],
        g: &GroupElement,
    ) -> bool {
        // height functional taking value 1 on a and b
        let det = a[0] * b[1] - a[1] * b[0];
        let height = |v: [i64; 2]| {
            // solve v = s a + t b, height s + t
            let s = (v[0] * b[1] - v[1] * b[0]) as f64 / det as f64;
            let t = (a[0] * v[1] - a[1] * v[0]) as f64 / det as f64;
            s + t
        };
        let mut sorted: Vec<&AffineRoot> = roots.iter().collect();
        sorted.sort_by(|x, y| height(x.grad2()).partial_cmp(&height(y.grad2())).unwrap());
        let mut rest = g.clone();
        for r in sorted {
            let (i, j) = designated_entry(r.grad2());
            let u = rest.entry(i, j).clone();
            if !self.prime.val_at_least(&u, r.level) {
                return false;
            }
            rest = self.x(r.grad2(), &(-u)).mul(&rest);
        }
        rest.is_identity()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorConstants {
    pub a: Scalar,
    pub b: Scalar,
    pub a1: Scalar,
    pub b1: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CommutatorRule {
    /// Same gradient: the groups are nested, so they commute.
    Parallel,
    /// `γ + γ' = k > 0`: contained in `U_{γ+1} U_{γ'+1} T(R)⁺`.
    Opposite { predicted: Vec<AffineRoot> },
    /// `γ + γ' = k <= 0`: no containment is claimed.
    OppositeNonPositive,
    /// Contained in `Π_{i,j>0} U_{iγ+jγ'}`.
    Generic {
        predicted: Vec<AffineRoot>,
        a: [i64; 2],
        b: [i64; 2],
    },
}

impl CommutatorRule {
    pub fn tag(&self) -> &'static str {
        match self {
            CommutatorRule::Parallel => "parallel",
            CommutatorRule::Opposite { .. } | CommutatorRule::OppositeNonPositive => "opposite",
            CommutatorRule::Generic { .. } => "generic",
        }
    }
}
