//! Left cosets of `K n₁ K n₂ K` sorted by Iwahori–Bruhat cell and support.

use std::collections::BTreeMap;

use super::coset::{CosetSet, CosetTable, Setting};
use super::support::single_root_witness;
use super::words::bruhat_cell;
use crate::affine::{reflection, AffineRoot, AffineWeylElement, Case, BETA, DELTA};
use crate::chevalley::GroupElement;
use crate::Error;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CellCount {
    pub cosets: usize,
    pub supported: usize,
}

#[derive(Debug, Clone)]
pub struct ProductClasses {
    pub cosets: usize,
    pub cells: BTreeMap<AffineWeylElement, CellCount>,
}

impl ProductClasses {
    /// Cells containing a supported coset.
    pub fn supported_cells(&self) -> Vec<AffineWeylElement> {
        self.cells
            .iter()
            .filter(|(_, c)| c.supported > 0)
            .map(|(w, _)| w.clone())
            .collect()
    }

    pub fn confined_to(&self, candidates: &[AffineWeylElement]) -> bool {
        self.supported_cells()
            .iter()
            .all(|w| candidates.contains(w))
    }
}

/// The cells allowed to carry the support of `f * f` for the generator realizing `n`:
/// `{1, w}` for a single reflection, `{1, w_δ, w_{1-β}, w_δ w_{1-β}}` for `n`.
pub fn product_candidates(case: Case, w: &AffineWeylElement) -> Vec<AffineWeylElement> {
    match case {
        Case::Sl2Gl1 => vec![AffineWeylElement::identity(2), w.clone()],
        Case::Gl2 => {
            let wd = reflection(&AffineRoot::new(DELTA.to_vec(), 0));
            let wb = reflection(&AffineRoot::new(BETA.to_vec(), 0).negate_plus(1));
            vec![
                AffineWeylElement::identity(2),
                wd.clone(),
                wb.clone(),
                wd.compose(&wb),
            ]
        }
    }
}

/// Enumerates `K n₁ K n₂ K = ∪ a_i b_j K` and decides the support of every coset. Cosets of
/// a known table inherit its decision; otherwise a single-root witness or a new orbit
/// settles it.
pub fn product_coset_classes(
    s: &Setting,
    n1: &GroupElement,
    n2: &GroupElement,
) -> Result<ProductClasses, Error> {
    let t1 = CosetTable::build(s, n1)?;
    let t2 = CosetTable::build(s, n2)?;
    let mut set = CosetSet::default();
    for a in &t1.reps {
        for b in &t2.reps {
            set.insert(s, a.mul(b));
        }
    }
    let mut known: Vec<CosetTable> = Vec::new();
    let mut cells: BTreeMap<AffineWeylElement, CellCount> = BTreeMap::new();
    for x in &set.reps {
        let supported = match known.iter().find(|t| t.find(s, x).is_some()) {
            Some(t) => t.supports(),
            None => {
                if single_root_witness(s, x)?.is_some() {
                    false
                } else {
                    let t = CosetTable::build(s, x)?;
                    let ok = t.supports();
                    known.push(t);
                    ok
                }
            }
        };
        let c = cells.entry(bruhat_cell(s.sp().prime(), x)).or_default();
        c.cosets += 1;
        if supported {
            c.supported += 1;
        }
    }
    Ok(ProductClasses {
        cosets: set.len(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::Sp4;
    use crate::hecke::words::{word_lift, word_weyl};
    use crate::scalar::Prime;

    #[test]
    fn identity_product() {
        let s = Setting::weak(&Sp4::new(Prime::new(3).unwrap()), Case::Sl2Gl1, 1).unwrap();
        let one = GroupElement::identity();
        let r = product_coset_classes(&s, &one, &one).unwrap();
        assert_eq!(r.cosets, 1);
        assert_eq!(r.supported_cells(), vec![AffineWeylElement::identity(2)]);
    }

    #[test]
    fn delta_square_is_confined() {
        let s = Setting::weak(&Sp4::new(Prime::new(3).unwrap()), Case::Sl2Gl1, 1).unwrap();
        let n = word_lift(s.sp(), Case::Sl2Gl1, &[0]);
        let r = product_coset_classes(&s, &n, &n).unwrap();
        let cand = product_candidates(Case::Sl2Gl1, &word_weyl(Case::Sl2Gl1, &[0]));
        assert!(r.confined_to(&cand), "{:?}", r.cells);
        assert_eq!(r.supported_cells().len(), 2);
    }
}
