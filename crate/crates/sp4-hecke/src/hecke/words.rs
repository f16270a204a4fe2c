//! Representatives in `N` of the strip-stabilizer generators, words in them, and the
//! Iwahori–Bruhat cell of an arbitrary element.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::affine::{
    gallery_length, q, strip_generators, AffineRoot, AffineWeylElement, Case, ALPHA, BETA, DELTA, Q,
};
use crate::chevalley::{GroupElement, Sp4, WEIGHTS};
use crate::filtration::gl2_n;
use crate::scalar::{int, Prime, Scalar};

/// Letter names of the two generators of each case.
pub fn letter_names(case: Case) -> [&'static str; 2] {
    match case {
        Case::Sl2Gl1 => ["δ", "1-δ"],
        Case::Gl2 => ["α", "n"],
    }
}

pub fn word_name(case: Case, word: &[usize]) -> String {
    if word.is_empty() {
        return "1".into();
    }
    let names = letter_names(case);
    word.iter().map(|&i| names[i]).collect::<Vec<_>>().join("·")
}

/// Elements of `N` representing the two generators:
/// `n_δ(-1), n_{1-δ}(-1)` or `n_α(-1) h_δ(-1), n_δ(-1) n_{1-β}(-1)`.
pub fn generator_reps(sp: &Sp4, case: Case) -> [GroupElement; 2] {
    let m1 = int(-1);
    let r = |g: [i64; 2]| AffineRoot::new(g.to_vec(), 0);
    match case {
        Case::Sl2Gl1 => [
            sp.n_of(&r(DELTA), &m1).unwrap(),
            sp.n_of(&r(DELTA).negate_plus(1), &m1).unwrap(),
        ],
        Case::Gl2 => [
            sp.n_of(&r(ALPHA), &m1).unwrap().mul(&sp.h(DELTA, &m1)),
            gl2_n(sp),
        ],
    }
}

pub fn word_lift(sp: &Sp4, case: Case, word: &[usize]) -> GroupElement {
    let reps = generator_reps(sp, case);
    word.iter()
        .fold(GroupElement::identity(), |acc, &i| acc.mul(&reps[i]))
}

pub fn word_weyl(case: Case, word: &[usize]) -> AffineWeylElement {
    let gens = strip_generators(case);
    word.iter().fold(AffineWeylElement::identity(2), |acc, &i| {
        acc.compose(&gens[i])
    })
}

/// Alternating words, one per element of the strip stabilizer with gallery length at most
/// `bound`, shortest first.
pub fn alternating_words(case: Case, bound: usize) -> Vec<Vec<usize>> {
    let mut seen: BTreeMap<AffineWeylElement, Vec<usize>> = BTreeMap::new();
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    seen.insert(AffineWeylElement::identity(2), vec![]);
    for _ in 0..2 * bound + 2 {
        let mut next = Vec::new();
        for w in &frontier {
            for letter in 0..2 {
                if w.last() == Some(&letter) {
                    continue;
                }
                let mut v = w.clone();
                v.push(letter);
                let e = word_weyl(case, &v);
                if gallery_length(&e, case).is_ok_and(|m| m <= bound) && !seen.contains_key(&e) {
                    seen.insert(e, v.clone());
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    let mut words: Vec<Vec<usize>> = seen.into_values().collect();
    words.sort_by_key(|w| (w.len(), w.clone()));
    words
}

/// Gallery length of the element a word represents.
pub fn word_gallery_length(case: Case, word: &[usize]) -> usize {
    gallery_length(&word_weyl(case, word), case).expect("strip-preserving")
}

/// Diagonal representatives `diag(a, b, 1/b, 1/a)` of `T(F_p)`.
pub fn torus_reps(p: &Prime) -> Vec<GroupElement> {
    let mut out = Vec::new();
    for a in 1..p.get() as i64 {
        for b in 1..p.get() as i64 {
            out.push(GroupElement::diag([
                int(a),
                int(b),
                int(b).recip(),
                int(a).recip(),
            ]));
        }
    }
    out
}

/// Affine Weyl group element `w` with `g ∈ I ṅ I`, `I` the Iwahori subgroup of the alcove
/// containing `(3/8, 1/8)`. Elimination uses `ν(i, j) = v(g_ij) + a_i - a_j` with `a` the
/// weights at that point; the minimum of `ν` over the remaining rows and columns is cleared
/// by row and column operations inside `I`.
pub fn bruhat_cell(p: &Prime, g: &GroupElement) -> AffineWeylElement {
    let x0 = [q(3, 8), q(1, 8)];
    let a: Vec<Q> = WEIGHTS
        .iter()
        .map(|w| Q::from(w[0]) * x0[0] + Q::from(w[1]) * x0[1])
        .collect();
    let mut m: [[Scalar; 4]; 4] = g.matrix().clone();
    let mut rows_left = [true; 4];
    let mut cols_left = [true; 4];
    for _ in 0..4 {
        let mut best: Option<(Q, usize, usize)> = None;
        for i in (0..4).filter(|&i| rows_left[i]) {
            for j in (0..4).filter(|&j| cols_left[j]) {
                if let Some(v) = p.valuation(&m[i][j]) {
                    let nu = Q::from(v) + a[i] - a[j];
                    if best.is_none_or(|(b, _, _)| nu < b) {
                        best = Some((nu, i, j));
                    }
                }
            }
        }
        let (_, i, j) = best.expect("invertible");
        for k in 0..4 {
            if k == i || m[k][j].is_zero() {
                continue;
            }
            let c = &m[k][j] / &m[i][j];
            let row = m[i].clone();
            for (l, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    m[k][l] -= &c * x;
                }
            }
        }
        for l in 0..4 {
            if l == j || m[i][l].is_zero() {
                continue;
            }
            let c = &m[i][l] / &m[i][j];
            for k in 0..4 {
                if !m[k][j].is_zero() {
                    let t = &c * &m[k][j];
                    m[k][l] -= &t;
                }
            }
        }
        rows_left[i] = false;
        cols_left[j] = false;
    }
    GroupElement::from_matrix_unchecked(m)
        .weyl_image(p)
        .expect("elimination ends monomial")
}

/// The monomial lift of the Weyl element with unit entries `±1`.
pub fn weyl_rep(sp: &Sp4, w: &AffineWeylElement) -> GroupElement {
    sp.weyl_lift(w)
}

/// `w_δ`, `w_{1-β}` and `w_δ w_{1-β}` as affine Weyl elements.
pub fn gl2_product_candidates() -> Vec<AffineWeylElement> {
    let r = |g: [i64; 2]| crate::affine::reflection(&AffineRoot::new(g.to_vec(), 0));
    let wd = r(DELTA);
    let wb = crate::affine::reflection(&AffineRoot::new(BETA.to_vec(), 0).negate_plus(1));
    vec![
        AffineWeylElement::identity(2),
        wd.clone(),
        wb.clone(),
        wd.compose(&wb),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::{reflection, weyl_window};
    use crate::filtration::FiltrationGroup;

    fn sp(p: u64) -> Sp4 {
        Sp4::new(Prime::new(p).unwrap())
    }

    #[test]
    fn reps_realize_generators() {
        let s = sp(3);
        for case in [Case::Sl2Gl1, Case::Gl2] {
            let reps = generator_reps(&s, case);
            let gens = strip_generators(case);
            for (r, g) in reps.iter().zip(gens.iter()) {
                assert!(r.is_symplectic());
                assert_eq!(&r.weyl_image(s.prime()).unwrap(), g);
            }
        }
    }

    #[test]
    fn n_square_and_inverse() {
        let s = sp(5);
        let n = gl2_n(&s);
        let minus = GroupElement::diag([int(-1), int(-1), int(-1), int(-1)]);
        assert_eq!(n.mul(&n), minus);
        let hb = s.h(BETA, &int(-1));
        let hd = s.h(DELTA, &int(-1));
        assert_eq!(n.inverse(), n.mul(&hb).mul(&hd));
        assert_eq!(hb.mul(&hd), s.h(ALPHA, &int(-1)));
    }

    #[test]
    fn word_counts() {
        assert_eq!(alternating_words(Case::Sl2Gl1, 0).len(), 1);
        assert_eq!(alternating_words(Case::Sl2Gl1, 2).len(), 5);
        assert_eq!(alternating_words(Case::Gl2, 0).len(), 2);
        assert_eq!(alternating_words(Case::Gl2, 2).len(), 10);
        for w in alternating_words(Case::Gl2, 2) {
            assert!(w.windows(2).all(|p| p[0] != p[1]));
        }
    }

    #[test]
    fn bruhat_cell_of_monomials_and_iwahori() {
        let s = sp(3);
        for w in weyl_window(1) {
            let n = s.weyl_lift(&w);
            assert_eq!(bruhat_cell(s.prime(), &n), w);
        }
        let i = FiltrationGroup::i_plus(&s);
        let n = s.weyl_lift(&reflection(&AffineRoot::new(DELTA.to_vec(), 0)));
        let gens = i.generators();
        let g = gens[0].mul(&gens[3]).mul(&n).mul(&gens[5]).mul(&gens[1]);
        assert_eq!(
            bruhat_cell(s.prime(), &g),
            reflection(&AffineRoot::new(DELTA.to_vec(), 0))
        );
    }
}
