//! Which double cosets `K g K` carry a nonzero element of `H(K, χ)`.

use std::collections::BTreeSet;

use num_complex::Complex64;

use super::coset::{CosetTable, Setting};
use super::words::{bruhat_cell, torus_reps};
use crate::affine::{
    reflection, strip_generators, AffineRoot, AffineWeylElement, Case, Region, RootSystemC, ALPHA,
    BETA, DELTA,
};
use crate::chevalley::GroupElement;
use crate::Error;

/// Largest level searched for single-root witnesses.
pub const WITNESS_LEVEL: i64 = 3;

/// An element `k ∈ K` with `g k g⁻¹ ∈ K` and `χ(g k g⁻¹) ≠ χ(k)`.
#[derive(Debug, Clone)]
pub enum Witness {
    /// `k = x_{root}(u)`, or `g⁻¹ k g` with `k = x_{root}(u)` when `inverse` is set.
    SingleRoot {
        root: AffineRoot,
        u: i64,
        inverse: bool,
        k: GroupElement,
    },
    /// A Schreier generator of `K ∩ g⁻¹ K g` from the coset orbit.
    Schreier { k: GroupElement },
}

impl Witness {
    pub fn element(&self) -> &GroupElement {
        match self {
            Witness::SingleRoot { k, .. } | Witness::Schreier { k } => k,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Witness::SingleRoot {
                root, u, inverse, ..
            } => {
                let side = if *inverse { "g⁻¹·g" } else { "" };
                format!("x_{{{root}}}({u}){side}")
            }
            Witness::Schreier { .. } => "orbit generator".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Support {
    Supported { cosets: usize },
    NotSupported(Witness),
    Inconclusive(String),
}

impl Support {
    pub fn is_supported(&self) -> Option<bool> {
        match self {
            Support::Supported { .. } => Some(true),
            Support::NotSupported(_) => Some(false),
            Support::Inconclusive(_) => None,
        }
    }
}

fn mismatch(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() > tol
}

/// Whether `k` witnesses that `K g K` is unsupported.
pub fn check_witness(s: &Setting, g: &GroupElement, k: &GroupElement) -> Result<bool, Error> {
    if !s.contains(k) {
        return Ok(false);
    }
    let c = g.mul(k).mul(&g.inverse());
    if !s.contains(&c) {
        return Ok(false);
    }
    Ok(mismatch(s.chi(&c)?, s.chi(k)?, s.tolerance))
}

/// Single-root search over `x_{γ+j}(u)`, `|j| ≤ WITNESS_LEVEL`, on both sides of `g`.
pub fn single_root_witness(s: &Setting, g: &GroupElement) -> Result<Option<Witness>, Error> {
    let sp = s.sp();
    let gi = g.inverse();
    for grad in RootSystemC::c2().roots() {
        for level in -WITNESS_LEVEL..=WITNESS_LEVEL {
            let root = AffineRoot::new(grad.clone(), level);
            for u in 1..s.q() as i64 {
                let x = sp.x_affine(&root, &crate::scalar::int(u))?;
                if !s.contains(&x) {
                    continue;
                }
                if check_witness(s, g, &x)? {
                    return Ok(Some(Witness::SingleRoot {
                        root,
                        u,
                        inverse: false,
                        k: x,
                    }));
                }
                let k = gi.mul(&x).mul(g);
                if check_witness(s, g, &k)? {
                    return Ok(Some(Witness::SingleRoot {
                        root,
                        u,
                        inverse: true,
                        k,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Single-root witness first, then the orbit of `gK` with its Schreier generators.
pub fn supports(s: &Setting, g: &GroupElement) -> Result<Support, Error> {
    if let Some(w) = single_root_witness(s, g)? {
        return Ok(Support::NotSupported(w));
    }
    match CosetTable::build(s, g) {
        Ok(t) => Ok(match t.obstruction {
            // h ∈ K with h g K = g K, so k = g⁻¹ h g ∈ K has g k g⁻¹ = h
            Some(h) => Support::NotSupported(Witness::Schreier {
                k: g.inverse().mul(&h).mul(g),
            }),
            None => Support::Supported { cosets: t.len() },
        }),
        Err(Error::SizeBound(b)) => Ok(Support::Inconclusive(format!(
            "no single-root witness and the orbit exceeds {b} cosets"
        ))),
        Err(e) => Err(e),
    }
}

/// Whether a monomial `n` preserves `χ` on the root subgroups it carries into `K`.
pub fn preserves_character(s: &Setting, n: &GroupElement) -> Result<bool, Error> {
    let sp = s.sp();
    let ni = n.inverse();
    for grad in RootSystemC::c2().roots() {
        let g2 = [grad[0], grad[1]];
        let low = s.k.level(g2);
        for level in low..=low + 2 * WITNESS_LEVEL {
            let root = AffineRoot::new(grad.clone(), level);
            for u in 1..s.q() as i64 {
                let x = sp.x_affine(&root, &crate::scalar::int(u))?;
                let c = n.mul(&x).mul(&ni);
                if s.contains(&c) && mismatch(s.chi(&c)?, s.chi(&x)?, s.tolerance) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Reference decision of `g ∈ K N_ψ K`: the Iwahori–Bruhat cell `w` of `g` must preserve
/// the strip, and `g` must lie in `K ñ K` for a lift `ñ = n_w t` that preserves `χ`.
#[derive(Debug, Default)]
pub struct NPsiOracle {
    tables: Vec<(AffineWeylElement, GroupElement, Option<CosetTable>)>,
}

impl NPsiOracle {
    pub fn contains(&mut self, s: &Setting, g: &GroupElement) -> Result<bool, Error> {
        let sp = s.sp();
        let w = bruhat_cell(sp.prime(), g);
        if !Region::strip(s.case()).is_preserved_by(&w) {
            return Ok(false);
        }
        if !self.tables.iter().any(|(v, _, _)| v == &w) {
            let n = sp.weyl_lift(&w);
            for t in torus_reps(sp.prime()) {
                let nt = n.mul(&t);
                let table = if preserves_character(s, &nt)? {
                    Some(CosetTable::build(s, &nt)?)
                } else {
                    None
                };
                self.tables.push((w.clone(), nt, table));
            }
        }
        Ok(self
            .tables
            .iter()
            .filter(|(v, _, _)| v == &w)
            .filter_map(|(_, _, t)| t.as_ref())
            .any(|t| t.find(s, g).is_some()))
    }
}

/// Weyl elements given by words of length at most `len` in the Iwahori simple reflections
/// `s_α, s_β, s_{1-δ}` and the strip generators of the case.
pub fn candidate_weyl_elements(case: Case, len: usize) -> Vec<AffineWeylElement> {
    let r = |g: [i64; 2]| AffineRoot::new(g.to_vec(), 0);
    let mut letters = vec![
        reflection(&r(ALPHA)),
        reflection(&r(BETA)),
        reflection(&r(DELTA).negate_plus(1)),
    ];
    letters.extend(strip_generators(case));
    let mut seen = BTreeSet::from([AffineWeylElement::identity(2)]);
    let mut frontier = vec![AffineWeylElement::identity(2)];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in &letters {
                let v = w.compose(l);
                if seen.insert(v.clone()) {
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    seen.into_iter().collect()
}

/// `x_{α+j}(u)` for `j ∈ {0, 1}` and all `u`, together with the identity.
pub fn alpha_factors(s: &Setting) -> Result<Vec<GroupElement>, Error> {
    let sp = s.sp();
    let mut out = vec![GroupElement::identity()];
    for j in 0..2 {
        for u in 1..s.q() as i64 {
            out.push(sp.x_affine(&AffineRoot::new(ALPHA.to_vec(), j), &crate::scalar::int(u))?);
        }
    }
    Ok(out)
}
