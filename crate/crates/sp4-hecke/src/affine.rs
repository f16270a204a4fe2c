//! Type C root systems, affine roots, the affine Weyl group and the strip geometry of `Sp(4)`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::Error;

pub type Q = Rational64;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

/// `e1 - e2`.
pub const ALPHA: [i64; 2] = [1, -1];
/// `2 e2`.
pub const BETA: [i64; 2] = [0, 2];
/// `2 e1`, the highest root.
pub const DELTA: [i64; 2] = [2, 0];
/// `e1 + e2`.
pub const ETA: [i64; 2] = [1, 1];

/// The two Levi subgroups of `Sp(4)` whose Hecke algebras are studied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    /// `SL(2) x GL(1)`: horizontal strip `0 < beta < 1`.
    Sl2Gl1,
    /// `GL(2)`: diagonal strip `0 < eta < 1`.
    Gl2,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Case::Sl2Gl1 => write!(f, "SL2xGL1"),
            Case::Gl2 => write!(f, "GL2"),
        }
    }
}

/// The root system `C_n` in the standard basis of `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystemC {
    rank: usize,
    roots: Vec<Vec<i64>>,
}

impl RootSystemC {
    pub fn new(rank: usize) -> Self {
        assert!(rank >= 1, "rank must be positive");
        let unit = |i: usize, c: i64| {
            let mut v = vec![0; rank];
            v[i] = c;
            v
        };
        let mut roots = Vec::new();
        for i in 0..rank {
            roots.push(unit(i, 2));
            roots.push(unit(i, -2));
            for j in i + 1..rank {
                for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                    let mut v = unit(i, a);
                    v[j] = b;
                    roots.push(v);
                }
            }
        }
        RootSystemC { rank, roots }
    }

    pub fn c2() -> Self {
        Self::new(2)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn is_root(&self, v: &[i64]) -> bool {
        self.roots.iter().any(|r| r == v)
    }

    /// `e1 - e2, ..., e_{n-1} - e_n, 2 e_n`.
    pub fn simple_roots(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut out: Vec<Vec<i64>> = (0..n - 1)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v[i + 1] = -1;
                v
            })
            .collect();
        let mut last = vec![0; n];
        last[n - 1] = 2;
        out.push(last);
        out
    }

    pub fn highest_root(&self) -> Vec<i64> {
        let mut v = vec![0; self.rank];
        v[0] = 2;
        v
    }

    pub fn coxeter_number(&self) -> usize {
        2 * self.rank
    }

    /// Simple roots together with `1 - highest root`.
    pub fn simple_affine_roots(&self) -> Vec<AffineRoot> {
        let mut out: Vec<AffineRoot> = self
            .simple_roots()
            .into_iter()
            .map(|g| AffineRoot::new(g, 0))
            .collect();
        out.push(AffineRoot::new(self.highest_root(), 0).negate_plus(1));
        out
    }

    /// Every affine root with the given gradient set and `|level| <= bound`.
    pub fn affine_roots(&self, bound: i64) -> Vec<AffineRoot> {
        let mut out = Vec::new();
        for g in &self.roots {
            for k in -bound..=bound {
                out.push(AffineRoot::new(g.clone(), k));
            }
        }
        out
    }
}

/// The affine functional `x -> <gradient, x> + level`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineRoot {
    pub gradient: Vec<i64>,
    pub level: i64,
}

impl AffineRoot {
    pub fn new(gradient: impl Into<Vec<i64>>, level: i64) -> Self {
        AffineRoot {
            gradient: gradient.into(),
            level,
        }
    }

    pub fn rank(&self) -> usize {
        self.gradient.len()
    }

    pub fn eval(&self, x: &[Q]) -> Result<Q, Error> {
        if x.len() != self.rank() {
            return Err(Error::Dimension {
                expected: self.rank(),
                got: x.len(),
            });
        }
        Ok(self
            .gradient
            .iter()
            .zip(x)
            .fold(Q::from_integer(self.level), |acc, (g, xi)| acc + xi * *g))
    }

    /// `k - self`, e.g. `negate_plus(1)` on `delta` gives `1 - delta`.
    pub fn negate_plus(&self, k: i64) -> Self {
        AffineRoot::new(
            self.gradient.iter().map(|g| -g).collect::<Vec<_>>(),
            k - self.level,
        )
    }

    pub fn shift(&self, k: i64) -> Self {
        AffineRoot::new(self.gradient.clone(), self.level + k)
    }

    /// Integer coroot `2g / |g|^2`; integral for every root of type C.
    pub fn coroot(&self) -> Vec<i64> {
        let norm: i64 = self.gradient.iter().map(|g| g * g).sum();
        self.gradient.iter().map(|g| 2 * g / norm).collect()
    }

    /// Gradient as a rank-2 array, for the `Sp(4)` model.
    pub fn grad2(&self) -> [i64; 2] {
        assert_eq!(self.rank(), 2, "rank-2 root expected");
        [self.gradient[0], self.gradient[1]]
    }
}

fn grad_name(g: &[i64]) -> Option<(&'static str, bool)> {
    match g {
        [1, -1] => Some(("α", false)),
        [-1, 1] => Some(("α", true)),
        [0, 2] => Some(("β", false)),
        [0, -2] => Some(("β", true)),
        [2, 0] => Some(("δ", false)),
        [-2, 0] => Some(("δ", true)),
        [1, 1] => Some(("η", false)),
        [-1, -1] => Some(("η", true)),
        _ => None,
    }
}

impl fmt::Display for AffineRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, neg) = match grad_name(&self.gradient) {
            Some(x) => x,
            None => return write!(f, "{:?}{:+}", self.gradient, self.level),
        };
        match (self.level, neg) {
            (0, false) => write!(f, "{name}"),
            (0, true) => write!(f, "-{name}"),
            (k, false) => write!(f, "{name}{k:+}"),
            (k, true) => write!(f, "{k}-{name}"),
        }
    }
}

/// Affine isometry `x -> linear * x + translation` with `linear` a signed permutation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineWeylElement {
    pub linear: Vec<Vec<i64>>,
    pub translation: Vec<i64>,
}

impl AffineWeylElement {
    pub fn identity(n: usize) -> Self {
        let linear = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        AffineWeylElement {
            linear,
            translation: vec![0; n],
        }
    }

    pub fn translation(t: Vec<i64>) -> Self {
        let mut w = Self::identity(t.len());
        w.translation = t;
        w
    }

    pub fn rank(&self) -> usize {
        self.translation.len()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rank())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.rank();
        let linear = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| self.linear[i][k] * other.linear[k][j]).sum())
                    .collect()
            })
            .collect();
        let translation = (0..n)
            .map(|i| {
                self.translation[i]
                    + (0..n)
                        .map(|k| self.linear[i][k] * other.translation[k])
                        .sum::<i64>()
            })
            .collect();
        AffineWeylElement {
            linear,
            translation,
        }
    }

    pub fn inverse(&self) -> Self {
        let n = self.rank();
        let linear: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| self.linear[j][i]).collect())
            .collect();
        let translation = (0..n)
            .map(|i| {
                -(0..n)
                    .map(|k| linear[i][k] * self.translation[k])
                    .sum::<i64>()
            })
            .collect();
        AffineWeylElement {
            linear,
            translation,
        }
    }

    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        let n = self.rank();
        (0..n)
            .map(|i| {
                (0..n).fold(Q::from_integer(self.translation[i]), |acc, k| {
                    acc + x[k] * self.linear[i][k]
                })
            })
            .collect()
    }

    /// The affine root `w·ψ` with `(w·ψ)(x) = ψ(w⁻¹ x)`.
    pub fn act_on_root(&self, psi: &AffineRoot) -> AffineRoot {
        let n = self.rank();
        let grad: Vec<i64> = (0..n)
            .map(|i| (0..n).map(|k| self.linear[i][k] * psi.gradient[k]).sum())
            .collect();
        let shift: i64 = grad.iter().zip(&self.translation).map(|(g, t)| g * t).sum();
        AffineRoot::new(grad, psi.level - shift)
    }

    /// Squared length of the translation part; used to bound enumerations.
    pub fn translation_norm(&self) -> i64 {
        self.translation.iter().map(|t| t.abs()).max().unwrap_or(0)
    }
}

/// Reflection in the wall `ψ = 0`: `x -> x - ψ(x) ψ^∨`.
pub fn reflection(psi: &AffineRoot) -> AffineWeylElement {
    let n = psi.rank();
    let cv = psi.coroot();
    let linear = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i64::from(i == j) - cv[i] * psi.gradient[j])
                .collect()
        })
        .collect();
    let translation = (0..n).map(|i| -psi.level * cv[i]).collect();
    AffineWeylElement {
        linear,
        translation,
    }
}

pub fn eval_affine_root(psi: &AffineRoot, x: &[Q]) -> Result<Q, Error> {
    psi.eval(x)
}

/// Every signed permutation matrix of size `n`.
pub fn signed_permutations(n: usize) -> Vec<Vec<Vec<i64>>> {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }
    let mut out = Vec::new();
    for p in perms(n) {
        for signs in 0..(1u32 << n) {
            let mut m = vec![vec![0; n]; n];
            for (i, &j) in p.iter().enumerate() {
                m[i][j] = if signs & (1 << i) != 0 { -1 } else { 1 };
            }
            out.push(m);
        }
    }
    out
}

/// All rank-2 affine Weyl elements whose translation lies in `[-bound, bound]^2`.
pub fn weyl_window(bound: i64) -> Vec<AffineWeylElement> {
    let mut out = Vec::new();
    for lin in signed_permutations(2) {
        for a in -bound..=bound {
            for b in -bound..=bound {
                out.push(AffineWeylElement {
                    linear: lin.clone(),
                    translation: vec![a, b],
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionKind {
    Sigma,
    SigmaPrime,
    Rho,
    HorizontalStrip,
    DiagonalStrip,
}

/// Open region `{x : ψ(x) > 0 for every ψ in inequalities}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub kind: RegionKind,
    pub inequalities: Vec<AffineRoot>,
}

impl Region {
    pub fn new(kind: RegionKind) -> Self {
        let a = |g: [i64; 2], k| AffineRoot::new(g.to_vec(), k);
        let neg = |g: [i64; 2], k| AffineRoot::new(g.to_vec(), 0).negate_plus(k);
        let inequalities = match kind {
            RegionKind::Sigma => vec![a(ALPHA, 0), a(BETA, 0), neg(DELTA, 1)],
            RegionKind::SigmaPrime => vec![neg(ALPHA, 0), a(DELTA, 0), neg(BETA, 1)],
            RegionKind::Rho => vec![a(BETA, 0), neg(BETA, 1), a(DELTA, 0), neg(DELTA, 1)],
            RegionKind::HorizontalStrip => vec![a(BETA, 0), neg(BETA, 1)],
            RegionKind::DiagonalStrip => vec![a(ETA, 0), neg(ETA, 1)],
        };
        Region { kind, inequalities }
    }

    pub fn strip(case: Case) -> Self {
        match case {
            Case::Sl2Gl1 => Region::new(RegionKind::HorizontalStrip),
            Case::Gl2 => Region::new(RegionKind::DiagonalStrip),
        }
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.inequalities
            .iter()
            .all(|psi| psi.eval(x).is_ok_and(|v| v > Q::zero()))
    }

    /// Defining inequalities of `w(self)`.
    pub fn image(&self, w: &AffineWeylElement) -> BTreeSet<AffineRoot> {
        self.inequalities
            .iter()
            .map(|psi| w.act_on_root(psi))
            .collect()
    }

    pub fn is_preserved_by(&self, w: &AffineWeylElement) -> bool {
        self.image(w) == self.inequalities.iter().cloned().collect()
    }
}

/// Closure corners of `ρ = (0, 1/2)^2`.
pub fn rho_corners() -> [Vec<Q>; 4] {
    let z = Q::zero();
    let h = q(1, 2);
    [vec![z, z], vec![h, z], vec![z, h], vec![h, h]]
}

pub fn base_point() -> Vec<Q> {
    vec![q(1, 4), q(1, 4)]
}

/// Positive on the open square spanned by `corners` (a parallelogram image of `ρ`).
fn positive_on(psi: &AffineRoot, corners: &[Vec<Q>], center: &[Q]) -> bool {
    corners
        .iter()
        .all(|c| psi.eval(c).is_ok_and(|v| v >= Q::zero()))
        && psi.eval(center).is_ok_and(|v| v > Q::zero())
}

fn generators(case: Case) -> [AffineWeylElement; 2] {
    let r = |g: [i64; 2], k| reflection(&AffineRoot::new(g.to_vec(), k));
    let rneg = |g: [i64; 2], k| reflection(&AffineRoot::new(g.to_vec(), 0).negate_plus(k));
    match case {
        Case::Sl2Gl1 => [r(DELTA, 0), rneg(DELTA, 1)],
        Case::Gl2 => [r(ALPHA, 0), r(DELTA, 0).compose(&rneg(BETA, 1))],
    }
}

/// Generators of the strip stabilizer: `(w_δ, w_{1-δ})` or `(w_α, w_δ w_{1-β})`.
pub fn strip_generators(case: Case) -> [AffineWeylElement; 2] {
    generators(case)
}

/// Hecke weight of each generator letter: the `q`-exponent contributed by one letter
/// is `weight * (2 or 3)`. `w_α` contributes nothing in the `GL(2)` case.
fn letter_weights(case: Case) -> [usize; 2] {
    match case {
        Case::Sl2Gl1 => [1, 1],
        Case::Gl2 => [0, 1],
    }
}

/// Number of `½ × ½` squares crossed from `ρ` to `w(ρ)` inside the strip.
pub fn gallery_length(w: &AffineWeylElement, case: Case) -> Result<usize, Error> {
    if !Region::strip(case).is_preserved_by(w) {
        return Err(Error::NotStripPreserving);
    }
    let c = w.apply(&base_point());
    let k = (c[0] - q(1, 4)) * 2;
    let expected_c1 = match case {
        Case::Sl2Gl1 => q(1, 4),
        Case::Gl2 => q(1, 4) - k / 2,
    };
    if !k.is_integer() || c[1] != expected_c1 {
        return Err(Error::NotStripPreserving);
    }
    Ok(k.to_integer().unsigned_abs() as usize)
}

/// Shortest alternating word in the strip generators representing `w`, as letter indices.
pub fn reduced_word(w: &AffineWeylElement, case: Case, max_len: usize) -> Option<Vec<usize>> {
    let gens = generators(case);
    let id = AffineWeylElement::identity(2);
    if *w == id {
        return Some(vec![]);
    }
    let mut seen = HashSet::new();
    seen.insert(id.clone());
    let mut queue = VecDeque::from([(id, Vec::<usize>::new())]);
    while let Some((x, word)) = queue.pop_front() {
        if word.len() >= max_len {
            continue;
        }
        for (i, g) in gens.iter().enumerate() {
            let y = x.compose(g);
            if seen.insert(y.clone()) {
                let mut wd = word.clone();
                wd.push(i);
                if y == *w {
                    return Some(wd);
                }
                queue.push_back((y, wd));
            }
        }
    }
    None
}

/// Weighted length of the reduced word: equals the gallery length in both cases.
pub fn word_length(w: &AffineWeylElement, case: Case) -> Option<usize> {
    let m = gallery_length(w, case).ok()?;
    let bound = 2 * m + 2;
    let word = reduced_word(w, case, bound)?;
    let weights = letter_weights(case);
    Some(word.iter().map(|&i| weights[i]).sum())
}

/// All strip-preserving elements with gallery length at most `length_bound`.
pub fn strip_stabilizer_elements(case: Case, length_bound: usize) -> Vec<AffineWeylElement> {
    let gens = generators(case);
    let max_word = 2 * length_bound + 1;
    let id = AffineWeylElement::identity(2);
    let mut seen = HashSet::new();
    seen.insert(id.clone());
    let mut frontier = vec![id.clone()];
    let mut out = vec![id];
    for _ in 0..max_word {
        let mut next = Vec::new();
        for x in &frontier {
            for g in &gens {
                let y = x.compose(g);
                if seen.insert(y.clone()) {
                    if gallery_length(&y, case).is_ok_and(|m| m <= length_bound) {
                        out.push(y.clone());
                    }
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    out.sort();
    out
}

/// Affine roots positive on `ρ` but not positive on `w(ρ)`.
pub fn wall_crossing_roots(
    w: &AffineWeylElement,
    case: Case,
) -> Result<BTreeSet<AffineRoot>, Error> {
    gallery_length(w, case)?;
    let corners = rho_corners();
    let center = base_point();
    let image: Vec<Vec<Q>> = corners.iter().map(|c| w.apply(c)).collect();
    let image_center = w.apply(&center);
    let bound = 2 * w.translation_norm() + 4;
    Ok(RootSystemC::c2()
        .affine_roots(bound)
        .into_iter()
        .filter(|psi| {
            positive_on(psi, &corners, &center) && !positive_on(psi, &image, &image_center)
        })
        .collect())
}

/// A Levi subgroup `GL(n_1) x ... x GL(n_r) x Sp(2m)` of `Sp(2n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LeviShape {
    pub gl_blocks: Vec<usize>,
    pub sp_half_rank: usize,
}

impl LeviShape {
    pub fn new(gl_blocks: Vec<usize>, sp_half_rank: usize) -> Result<Self, Error> {
        if gl_blocks.contains(&0) {
            return Err(Error::Invalid("GL blocks must be positive".into()));
        }
        if gl_blocks.is_empty() && sp_half_rank == 0 {
            return Err(Error::Invalid("empty Levi".into()));
        }
        Ok(LeviShape {
            gl_blocks,
            sp_half_rank,
        })
    }

    pub fn ambient_rank(&self) -> usize {
        self.sp_half_rank + self.gl_blocks.iter().sum::<usize>()
    }

    /// Simple affine roots of the Levi, on consecutive coordinates with `Sp` last.
    pub fn simple_affine_roots(&self) -> Vec<AffineRoot> {
        let n = self.ambient_rank();
        let e = |i: usize, c: i64| {
            let mut v = vec![0; n];
            v[i] = c;
            v
        };
        let diff = |i: usize, j: usize| {
            let mut v = e(i, 1);
            v[j] = -1;
            v
        };
        let mut out = Vec::new();
        let mut start = 0;
        for &b in &self.gl_blocks {
            if b > 1 {
                for i in start..start + b - 1 {
                    out.push(AffineRoot::new(diff(i, i + 1), 0));
                }
                out.push(AffineRoot::new(diff(start, start + b - 1), 0).negate_plus(1));
            }
            start += b;
        }
        let m = self.sp_half_rank;
        if m > 0 {
            for i in start..n - 1 {
                out.push(AffineRoot::new(diff(i, i + 1), 0));
            }
            out.push(AffineRoot::new(e(n - 1, 2), 0));
            out.push(AffineRoot::new(e(start, 2), 0).negate_plus(1));
        }
        out
    }

    /// The rule implied by the two pairwise dichotomies: all `GL` blocks of size `> 1` agree,
    /// and a `GL(k)` block next to `Sp(2m)` needs `k = 2m`.
    pub fn admissible_by_dichotomies(&self) -> bool {
        let big: BTreeSet<usize> = self.gl_blocks.iter().copied().filter(|&b| b > 1).collect();
        let has_roots = !big.is_empty() || self.sp_half_rank > 0;
        let blocks_agree = big.len() <= 1;
        let sp_agrees = match big.iter().next() {
            Some(&k) if self.sp_half_rank > 0 => k == 2 * self.sp_half_rank,
            _ => true,
        };
        has_roots && blocks_agree && sp_agrees
    }

    /// Literal closing list: `GL(k)^r × Sp(2k)` with `k > 1`, or `GL(1) × Sp(2n-2)`.
    pub fn matches_closing_forms(&self) -> bool {
        let m = self.sp_half_rank;
        match self.gl_blocks.as_slice() {
            [1] => m >= 1,
            [k, rest @ ..] => *k > 1 && m == *k && rest.iter().all(|b| b == k),
            [] => false,
        }
    }
}

impl fmt::Display for LeviShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.gl_blocks.iter().map(|b| format!("GL({b})")).collect();
        if self.sp_half_rank > 0 {
            parts.push(format!("Sp({})", 2 * self.sp_half_rank));
        }
        write!(f, "{}", parts.join("×"))
    }
}

/// Solution set of "all simple affine roots of the Levi take one common value".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeviPoint {
    pub particular: Vec<Q>,
    pub directions: Vec<Vec<Q>>,
    pub value: Q,
}

/// Solves the exact linear system; `None` when it is inconsistent or has no roots to equate.
pub fn levi_common_point(shape: &LeviShape) -> Option<LeviPoint> {
    let roots = shape.simple_affine_roots();
    if roots.is_empty() {
        return None;
    }
    let n = shape.ambient_rank();
    // unknowns x_0..x_{n-1}, c; rows g·x - c = -k
    let mut rows: Vec<Vec<Q>> = roots
        .iter()
        .map(|r| {
            let mut row: Vec<Q> = r.gradient.iter().map(|&g| Q::from_integer(g)).collect();
            row.push(-Q::one());
            row.push(Q::from_integer(-r.level));
            row
        })
        .collect();
    let cols = n + 1;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c];
                for j in 0..=cols {
                    let t = rows[r][j] * f;
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    if free.contains(&n) {
        return None;
    }
    let mut particular = vec![Q::zero(); cols];
    for (i, &pc) in pivots.iter().enumerate() {
        particular[pc] = rows[i][cols];
    }
    let directions = free
        .iter()
        .map(|&f| {
            let mut d = vec![Q::zero(); cols];
            d[f] = Q::one();
            for (i, &pc) in pivots.iter().enumerate() {
                d[pc] = -rows[i][f];
            }
            d
        })
        .collect::<Vec<_>>();
    if directions.iter().any(|d| !d[n].is_zero()) {
        return None;
    }
    let value = particular[n];
    if value <= Q::zero() {
        return None;
    }
    Some(LeviPoint {
        particular: particular[..n].to_vec(),
        directions: directions.into_iter().map(|d| d[..n].to_vec()).collect(),
        value,
    })
}

/// Levi shapes of `Sp(2n)` up to block order: partitions of `n - m` for each `m`.
pub fn levi_shapes(n: usize) -> Vec<LeviShape> {
    fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in (1..=max.min(n)).rev() {
            for mut rest in partitions(n - first, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    let mut out = Vec::new();
    for m in 0..=n {
        for blocks in partitions(n - m, n - m) {
            if let Ok(s) = LeviShape::new(blocks, m) {
                out.push(s);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn root(g: [i64; 2], k: i64) -> AffineRoot {
        AffineRoot::new(g.to_vec(), k)
    }

    #[test]
    fn c2_data() {
        let c2 = RootSystemC::c2();
        assert_eq!(c2.roots().len(), 8);
        assert_eq!(c2.coxeter_number(), 4);
        let simple = c2.simple_affine_roots();
        assert_eq!(
            simple,
            vec![root(ALPHA, 0), root(BETA, 0), root(DELTA, 0).negate_plus(1)]
        );
        for r in c2.roots() {
            let len: i64 = r.iter().map(|x| x * x).sum();
            assert!(len == 2 || len == 4);
            let neg: Vec<i64> = r.iter().map(|x| -x).collect();
            assert!(c2.is_root(&neg));
        }
    }

    #[test]
    fn evaluation_examples() {
        let p = base_point();
        assert_eq!(root(DELTA, 0).eval(&p).unwrap(), q(1, 2));
        assert_eq!(root(DELTA, 0).negate_plus(1).eval(&p).unwrap(), q(1, 2));
        assert_eq!(root(ALPHA, 0).eval(&[q(3, 7), q(3, 7)]).unwrap(), q(0, 1));
        assert!(root(ALPHA, 0).eval(&[q(1, 2)]).is_err());
    }

    #[test]
    fn reflection_examples() {
        let x = vec![q(1, 3), q(1, 5)];
        assert_eq!(
            reflection(&root(ALPHA, 0)).apply(&x),
            vec![q(1, 5), q(1, 3)]
        );
        assert_eq!(
            reflection(&root(DELTA, 0)).apply(&x),
            vec![q(-1, 3), q(1, 5)]
        );
        let r = reflection(&root(DELTA, 0).negate_plus(1));
        assert_eq!(r.apply(&x), vec![q(2, 3), q(1, 5)]);
        assert_eq!(r.apply(&[q(1, 2), q(0, 1)]), vec![q(1, 2), q(0, 1)]);
    }

    #[test]
    fn reflections_are_involutions_fixing_their_wall() {
        for psi in RootSystemC::c2().affine_roots(3) {
            let s = reflection(&psi);
            assert!(s.compose(&s).is_identity());
            // a point on the wall: solve along the gradient
            let g = &psi.gradient;
            let norm = g[0] * g[0] + g[1] * g[1];
            let t = q(-psi.level, norm);
            let x = vec![t * g[0], t * g[1]];
            assert_eq!(psi.eval(&x).unwrap(), q(0, 1));
            assert_eq!(s.apply(&x), x);
        }
    }

    #[test]
    fn root_action_is_pullback() {
        let pts = [vec![q(1, 3), q(2, 7)], vec![q(-5, 4), q(1, 9)]];
        for w in weyl_window(1) {
            for psi in RootSystemC::c2().affine_roots(2) {
                let wpsi = w.act_on_root(&psi);
                for x in &pts {
                    let y = w.inverse().apply(x);
                    assert_eq!(wpsi.eval(x).unwrap(), psi.eval(&y).unwrap());
                }
            }
        }
    }

    #[test]
    fn regions() {
        let sigma = Region::new(RegionKind::Sigma);
        let sigma_p = Region::new(RegionKind::SigmaPrime);
        let rho = Region::new(RegionKind::Rho);
        let a = vec![q(3, 8), q(1, 8)];
        let b = vec![q(1, 8), q(3, 8)];
        assert!(sigma.contains(&a) && !sigma.contains(&b));
        assert!(sigma_p.contains(&b) && !sigma_p.contains(&a));
        assert!(rho.contains(&a) && rho.contains(&b) && rho.contains(&base_point()));
    }

    #[test]
    fn strip_stabilizer_small() {
        let one = strip_stabilizer_elements(Case::Sl2Gl1, 0);
        assert_eq!(one, vec![AffineWeylElement::identity(2)]);
        let [wd, w1d] = strip_generators(Case::Sl2Gl1);
        let s1 = strip_stabilizer_elements(Case::Sl2Gl1, 1);
        assert_eq!(s1.len(), 3);
        assert!(s1.contains(&wd) && s1.contains(&w1d));
        let [_, wn] = strip_generators(Case::Gl2);
        assert!(strip_stabilizer_elements(Case::Gl2, 1).contains(&wn));
    }

    #[test]
    fn strip_stabilizer_matches_geometric_enumeration() {
        for case in [Case::Sl2Gl1, Case::Gl2] {
            for bound in 0..=3 {
                let from_words: BTreeSet<_> =
                    strip_stabilizer_elements(case, bound).into_iter().collect();
                let geometric: BTreeSet<_> = weyl_window(bound as i64 + 2)
                    .into_iter()
                    .filter(|w| gallery_length(w, case).is_ok_and(|m| m <= bound))
                    .collect();
                assert_eq!(from_words, geometric, "{case} bound {bound}");
                let per_length = match case {
                    Case::Sl2Gl1 => 1 + 2 * bound,
                    Case::Gl2 => 2 + 4 * bound,
                };
                assert_eq!(from_words.len(), per_length);
            }
        }
    }

    #[test]
    fn gallery_length_examples() {
        let [wd, w1d] = strip_generators(Case::Sl2Gl1);
        assert_eq!(
            gallery_length(&AffineWeylElement::identity(2), Case::Sl2Gl1),
            Ok(0)
        );
        assert_eq!(gallery_length(&wd, Case::Sl2Gl1), Ok(1));
        assert_eq!(gallery_length(&wd.compose(&w1d), Case::Sl2Gl1), Ok(2));
        let swap = reflection(&root(ALPHA, 0));
        assert_eq!(
            gallery_length(&swap, Case::Sl2Gl1),
            Err(Error::NotStripPreserving)
        );
        assert_eq!(gallery_length(&swap, Case::Gl2), Ok(0));
    }

    #[test]
    fn wall_crossing_examples() {
        let [wd, _] = strip_generators(Case::Sl2Gl1);
        let expected: BTreeSet<_> = [root(ETA, 0), root(DELTA, 0)].into_iter().collect();
        assert_eq!(wall_crossing_roots(&wd, Case::Sl2Gl1).unwrap(), expected);
        let [_, wn] = strip_generators(Case::Gl2);
        let expected: BTreeSet<_> = [root(DELTA, 0), root(BETA, 0).negate_plus(1), root(ALPHA, 1)]
            .into_iter()
            .collect();
        assert_eq!(wall_crossing_roots(&wn, Case::Gl2).unwrap(), expected);
        let id = AffineWeylElement::identity(2);
        assert!(wall_crossing_roots(&id, Case::Gl2).unwrap().is_empty());
    }

    #[test]
    fn wall_crossings_count_two_or_three_per_square() {
        for (case, per) in [(Case::Sl2Gl1, 2), (Case::Gl2, 3)] {
            for w in strip_stabilizer_elements(case, 4) {
                let m = gallery_length(&w, case).unwrap();
                assert_eq!(wall_crossing_roots(&w, case).unwrap().len(), per * m);
                assert_eq!(word_length(&w, case), Some(m));
            }
        }
    }

    #[test]
    fn simply_transitive_on_alcoves() {
        let sigma = Region::new(RegionKind::Sigma);
        let bary = vec![q(3, 8), q(1, 8)];
        assert!(sigma.contains(&bary));
        let window = weyl_window(2);
        let inner = weyl_window(1);
        for w1 in inner.iter().step_by(7) {
            for w2 in inner.iter().step_by(5) {
                let b1 = w1.apply(&bary);
                let b2 = w2.apply(&bary);
                let hits = window.iter().filter(|w| w.apply(&b1) == b2).count();
                assert_eq!(hits, 1);
            }
        }
    }

    #[test]
    fn levi_examples() {
        let sl2 = LeviShape::new(vec![1], 1).unwrap();
        let pt = levi_common_point(&sl2).unwrap();
        assert_eq!(pt.particular[1], q(1, 4));
        assert_eq!(pt.directions.len(), 1);
        assert_eq!(pt.directions[0][1], q(0, 1));
        assert_eq!(pt.value, q(1, 2));

        assert!(levi_common_point(&LeviShape::new(vec![3, 2], 0).unwrap()).is_none());
        assert!(levi_common_point(&LeviShape::new(vec![3, 3], 0).unwrap()).is_some());
        assert!(levi_common_point(&LeviShape::new(vec![3], 2).unwrap()).is_none());
        assert!(levi_common_point(&LeviShape::new(vec![4], 2).unwrap()).is_some());
        assert!(levi_common_point(&LeviShape::new(vec![2], 1).unwrap()).is_some());
        assert!(levi_common_point(&LeviShape::new(vec![1, 1], 0).unwrap()).is_none());
    }

    #[test]
    fn closing_forms_miss_solver_shapes() {
        let shape = |b: Vec<usize>, m| LeviShape::new(b, m).unwrap();
        assert!(shape(vec![1], 2).matches_closing_forms());
        assert!(shape(vec![2, 2], 2).matches_closing_forms());
        assert!(!shape(vec![2], 1).matches_closing_forms());
        assert!(levi_common_point(&shape(vec![2], 1)).is_some());
        assert!(!shape(vec![3, 3], 0).matches_closing_forms());
        assert!(levi_common_point(&shape(vec![3, 3], 0)).is_some());
    }

    #[test]
    fn levi_solver_matches_dichotomy_rule() {
        for n in 1..=6 {
            for shape in levi_shapes(n) {
                let solved = levi_common_point(&shape);
                assert_eq!(
                    solved.is_some(),
                    shape.admissible_by_dichotomies(),
                    "{shape}"
                );
                if let Some(pt) = solved {
                    for r in shape.simple_affine_roots() {
                        assert_eq!(r.eval(&pt.particular).unwrap(), pt.value);
                        for d in &pt.directions {
                            let g: Q = r.gradient.iter().zip(d).map(|(g, x)| x * *g).sum();
                            assert_eq!(g, q(0, 1));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn display_names() {
        assert_eq!(root(DELTA, 0).negate_plus(1).to_string(), "1-δ");
        assert_eq!(root(ALPHA, 1).to_string(), "α+1");
        assert_eq!(root(ETA, 0).to_string(), "η");
    }
}
