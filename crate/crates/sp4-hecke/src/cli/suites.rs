//! Verification suites. Each returns report rows; aborts surface as errors.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::Row;
use super::{RunConfig, Suite};
use crate::affine::{
    gallery_length, levi_common_point, levi_shapes, strip_stabilizer_elements, wall_crossing_roots,
    AffineRoot, AffineWeylElement, Case, LeviShape, RootSystemC, DELTA, ETA,
};
use crate::chevalley::{commutator, GroupElement, Sp4};
use crate::filtration::{
    root_of_unity, standard_factors, Character, FiltrationGroup, Mu, Quotient,
};
use crate::hecke::gauss::{g_delta, g_one_minus_delta};
use crate::hecke::iso::{expected_relations, iso_check, normalized_generators, square_formulas};
use crate::hecke::presented::reduced_words;
use crate::hecke::products::{product_candidates, product_coset_classes};
use crate::hecke::support::{
    alpha_factors, candidate_weyl_elements, check_witness, supports, NPsiOracle, Support,
};
use crate::hecke::words::{
    alternating_words, word_gallery_length, word_lift, word_name, word_weyl,
};
use crate::hecke::{CosetTable, HeckeAlgebra};
use crate::scalar::int;
use crate::Error;

/// Largest gallery length of the geometric wall-crossing count.
pub const GEOMETRIC_LENGTH: usize = 4;

/// Random evaluation points of the associativity check.
pub const ASSOCIATIVITY_POINTS: usize = 10;

/// Runs one suite, or all of them in order, collecting the errors of aborted suites.
pub fn run_suite(cfg: &RunConfig, suite: Suite) -> (Vec<Row>, Vec<Error>) {
    let all = [
        Suite::Subgroups,
        Suite::Support,
        Suite::Length,
        Suite::Gauss,
        Suite::Structure,
        Suite::Iso,
    ];
    let selected: Vec<Suite> = match suite {
        Suite::All => all.to_vec(),
        s => vec![s],
    };
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for s in selected {
        let r = match s {
            Suite::Subgroups => subgroups(cfg),
            Suite::Support => support(cfg),
            Suite::Length => length(cfg),
            Suite::Gauss => gauss(cfg),
            Suite::Structure => structure(cfg),
            Suite::Iso => iso(cfg),
            Suite::All => unreachable!(),
        };
        match r {
            Ok(mut r) => rows.append(&mut r),
            Err(e) => errors.push(e),
        }
    }
    (rows, errors)
}

/// `w` as its action on coordinates, e.g. `(1-x, y)`.
fn weyl_label(w: &AffineWeylElement) -> String {
    let vars = ["x", "y"];
    let coords: Vec<String> = w
        .linear
        .iter()
        .zip(&w.translation)
        .map(|(row, t)| {
            let mut out = if *t != 0 {
                t.to_string()
            } else {
                String::new()
            };
            for (c, v) in row.iter().zip(vars) {
                match *c {
                    0 => {}
                    1 if out.is_empty() => out.push_str(v),
                    1 => out.push_str(&format!("+{v}")),
                    -1 => out.push_str(&format!("-{v}")),
                    c => out.push_str(&format!("{c:+}{v}")),
                }
            }
            out
        })
        .collect();
    format!("({})", coords.join(", "))
}

/// Normality, the abelian quotient and its six factors, and the commutation rules.
pub fn subgroups(cfg: &RunConfig) -> Result<Vec<Row>, Error> {
    let sp = cfg.sp()?;
    let p = cfg.prime as u128;
    let kp = FiltrationGroup::k_plus(&sp);
    let kpp = FiltrationGroup::k_plus_plus(&sp);
    let mut rows = Vec::new();

    let (mut not_normal, mut not_central) = (0u128, 0u128);
    for g in kp.generators() {
        let gi = g.inverse();
        for k in kpp.generators() {
            not_normal += u128::from(!kpp.contains(&g.mul(&k).mul(&gi)));
            not_normal += u128::from(!kpp.contains(&gi.mul(&k).mul(&g)));
        }
        for h in kp.generators() {
            not_central += u128::from(!kpp.contains(&commutator(&g, &h)));
        }
    }
    rows.push(Row::count(
        "K⁺⁺ normal in K⁺: conjugates of generators outside K⁺⁺",
        not_normal,
        0,
    ));
    rows.push(Row::count(
        "K⁺/K⁺⁺ abelian: generator commutators outside K⁺⁺",
        not_central,
        0,
    ));

    let quotient = Quotient::k_plus(&sp);
    let order = quotient.orbit_order(1 << 22)? as u128;
    rows.push(Row::count("|K⁺/K⁺⁺| = p⁶", order, p.pow(6)));

    let names = |v: &BTreeSet<_>| {
        v.iter()
            .map(|r: &crate::affine::AffineRoot| r.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    let found: BTreeSet<_> = Quotient::new(kp.clone(), kpp.clone())
        .factors
        .into_iter()
        .collect();
    let simple: BTreeSet<_> = kp.simple_factors().into_iter().collect();
    let standard: BTreeSet<_> = standard_factors().into_iter().collect();
    rows.push(Row::holds(
        "K⁺/K⁺⁺ factors: affine roots of K⁺ missing from K⁺⁺",
        names(&found),
        names(&standard),
        found == standard,
    ));
    rows.push(Row::holds(
        "K⁺/K⁺⁺ factors: affine roots equal to the depth at the point",
        names(&simple),
        names(&standard),
        simple == standard,
    ));

    let order_mod = kp.pattern_order_mod(2);
    if order_mod <= 1 << 21 {
        let closure = kp.closure_mod(2, 1 << 21)?;
        rows.push(Row::count(
            "|image of K⁺ mod p²| from generators",
            closure.len() as u128,
            order_mod,
        ));
    }

    rows.extend(commutation_rules(&sp)?);
    Ok(rows)
}

/// `[x_γ(u), x_γ'(v)]` against the predicted subgroup for all affine roots with
/// `|level| ≤ 2` and all units `u, v` below `p`, one row per rule.
pub fn commutation_rules(sp: &Sp4) -> Result<Vec<Row>, Error> {
    let roots = RootSystemC::c2().affine_roots(2);
    let p = sp.prime().get() as i64;
    let mut tally: Vec<(&'static str, u128, u128)> =
        vec![("generic", 0, 0), ("opposite", 0, 0), ("parallel", 0, 0)];
    for r1 in &roots {
        for r2 in &roots {
            let rule = sp.classify_commutator(r1, r2);
            for u in 1..p {
                let x = sp.x_affine(r1, &int(u))?;
                for v in 1..p {
                    let y = sp.x_affine(r2, &int(v))?;
                    let Some(ok) = sp.in_predicted(&rule, &commutator(&x, &y)) else {
                        continue;
                    };
                    let t = tally
                        .iter_mut()
                        .find(|t| t.0 == rule.tag())
                        .expect("known tag");
                    t.1 += 1;
                    t.2 += u128::from(!ok);
                }
            }
        }
    }
    Ok(tally
        .into_iter()
        .map(|(tag, checked, bad)| {
            let mut r = Row::count(
                format!("[U_γ, U_γ'] in predicted group ({tag} pairs): violations"),
                bad,
                0,
            );
            r.computed = format!("{bad} of {checked}");
            r
        })
        .collect())
}

/// Support of `x n y` over candidate Weyl elements against the `N_ψ` oracle.
pub fn support(cfg: &RunConfig) -> Result<Vec<Row>, Error> {
    let s = cfg.weak()?;
    let sp = s.sp().clone();
    let xs = alpha_factors(&s)?;
    let mut oracle = NPsiOracle::default();
    let mut rows = Vec::new();
    for w in candidate_weyl_elements(cfg.case(), cfg.length_bound) {
        let n = sp.weyl_lift(&w);
        let (mut positive, mut mismatched, mut unwitnessed, mut total) =
            (0u128, 0u128, 0u128, 0u128);
        for x in &xs {
            for y in &xs {
                let g = x.mul(&n).mul(y);
                let decided = supports(&s, &g)?;
                let expected = oracle.contains(&s, &g)?;
                total += 1;
                match decided {
                    Support::Supported { .. } => positive += 1,
                    Support::NotSupported(ref wit) => {
                        unwitnessed += u128::from(!check_witness(&s, &g, wit.element())?);
                    }
                    Support::Inconclusive(msg) => return Err(Error::Inconclusive(msg)),
                }
                mismatched += u128::from(decided.is_supported() != Some(expected));
            }
        }
        let mut r = Row::count(
            format!("x n y supported iff in K⁺N_ψK⁺, w = {}", weyl_label(&w)),
            mismatched + unwitnessed,
            0,
        );
        r.computed = format!(
            "{positive}/{total} supported, {mismatched} disagreements, {unwitnessed} unwitnessed"
        );
        r.expected = "0 disagreements, 0 unwitnessed".into();
        rows.push(r);
    }
    Ok(rows)
}

fn length_exponent(case: Case) -> u32 {
    match case {
        Case::Sl2Gl1 => 2,
        Case::Gl2 => 3,
    }
}

/// Coset counts `|K⁺nK⁺/K⁺| = q^{2m}` or `q^{3m}` for words of gallery length up to the
/// bound, and the wall-crossing count `2m` or `3m` up to [`GEOMETRIC_LENGTH`].
pub fn length(cfg: &RunConfig) -> Result<Vec<Row>, Error> {
    let s = cfg.weak()?;
    let case = cfg.case();
    let e = length_exponent(case);
    let q = cfg.prime as u128;
    let mut rows = Vec::new();
    for w in alternating_words(case, cfg.length_bound) {
        let m = word_gallery_length(case, &w) as u32;
        let t = CosetTable::build(&s, &word_lift(s.sp(), case, &w))?;
        rows.push(Row::count(
            format!(
                "|K⁺nK⁺/K⁺| = q^({e}m), n = {}, m = {m}",
                word_name(case, &w)
            ),
            t.len() as u128,
            q.pow(e * m),
        ));
    }
    for w in strip_stabilizer_elements(case, GEOMETRIC_LENGTH) {
        let m = gallery_length(&w, case)?;
        let crossed = wall_crossing_roots(&w, case)?.len();
        rows.push(Row::count(
            format!("walls crossed = {e}m, w = {}, m = {m}", weyl_label(&w)),
            crossed as u128,
            (e as usize * m) as u128,
        ));
    }
    Ok(rows)
}

/// `G² = μ(h_δ(-1)) q` and `|G|² = q` for every multiplier, the nontrivial quadratic `μ`,
/// and the explicit two-term sum at `p = 3`.
pub fn gauss(cfg: &RunConfig) -> Result<Vec<Row>, Error> {
    let sp = cfg.sp()?;
    let p = sp.prime().clone();
    let q = p.get() as f64;
    let tol = cfg.tolerance.min(1e-9);
    let mut rows = Vec::new();
    for m in 1..p.get() {
        let chi = Character::normalized(&sp, Case::Sl2Gl1, m, Mu::legendre(&p))?;
        let sign = chi.mu_torus(&sp.h(DELTA, &int(-1)))?;
        for (name, g) in [
            ("G_δ", g_delta(&sp, &chi)?),
            ("G_{1-δ}", g_one_minus_delta(&sp, &chi)?),
        ] {
            rows.push(Row::complex(
                format!("{name}² = μ(h_δ(-1)) q, multiplier {m}"),
                g * g,
                sign * q,
                tol,
            ));
            rows.push(Row::complex(
                format!("|{name}|² = q, multiplier {m}"),
                Complex64::new(g.norm_sqr(), 0.0),
                Complex64::new(q, 0.0),
                tol,
            ));
        }
        if p.get() == 3 && m == 1 {
            // μ(1) ζ + μ(2) ζ² with μ the Legendre symbol
            let two_term = root_of_unity(1, 3) - root_of_unity(2, 3);
            rows.push(Row::complex(
                "G_δ = ζ - ζ², p = 3",
                g_delta(&sp, &chi)?,
                two_term,
                tol,
            ));
        }
    }
    Ok(rows)
}

fn legendre_or_trivial(cfg: &RunConfig) -> &'static str {
    match cfg.mu {
        super::MuMode::Trivial => "μ trivial",
        super::MuMode::Legendre => "μ Legendre",
    }
}

/// Squares of the generators against their closed forms, unit law, associativity at
/// random points, and confinement of the product cosets.
pub fn structure(cfg: &RunConfig) -> Result<Vec<Row>, Error> {
    let case = cfg.case();
    let tol = cfg.tolerance;
    let mut alg = HeckeAlgebra::new(cfg.strong()?)?;
    for w in reduced_words(2) {
        alg.register_word(&w)?;
    }
    let ids = [alg.register_word(&[0])?, alg.register_word(&[1])?];
    let formulas = square_formulas(&alg)?;
    let label = legendre_or_trivial(cfg);
    let mut rows = Vec::new();
    let gens = [alg.unit(), alg.basis(ids[0]), alg.basis(ids[1])];
    for i in 0..2 {
        let f = alg.basis(ids[i]);
        let sq = alg.multiply(&f, &f)?;
        let name = word_name(case, &[i]);
        let want = alg
            .unit()
            .scale(formulas[i].c0)
            .add(&f.scale(formulas[i].c1));
        rows.push(Row::complex(
            format!("f_{name}*f_{name}: coefficient of 1_χ, {label}"),
            sq.coefficient(0),
            formulas[i].c0,
            tol,
        ));
        rows.push(Row::complex(
            format!("f_{name}*f_{name}: coefficient of f_{name}, {label}"),
            sq.coefficient(ids[i]),
            formulas[i].c1,
            tol,
        ));
        rows.push(Row::distance(
            format!("f_{name}*f_{name}: mass off the closed form, {label}"),
            sq.distance(&want),
            tol,
        ));
        let left = alg.multiply(&alg.unit(), &f)?.distance(&f);
        let right = alg.multiply(&f, &alg.unit())?.distance(&f);
        rows.push(Row::distance(
            format!("1_χ*f_{name} = f_{name} = f_{name}*1_χ"),
            left.max(right),
            tol,
        ));
    }

    // ((f*g)*h)(y) and (f*(g*h))(y) pointwise, at y = a b c k with a, b, c drawn from the
    // supports of f, g, h and k ∈ K
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut worst, mut largest) = (0f64, 0f64);
    let kgens = alg.setting().generators();
    for _ in 0..ASSOCIATIVITY_POINTS {
        let [f, g, h] = [0; 3].map(|_| &gens[rng.gen_range(0..3)]);
        let mut y = GroupElement::identity();
        for e in [f, g, h] {
            let id = *e.terms.keys().next().expect("basis element");
            let t = &alg.class(id).table;
            y = y.mul(&t.reps[rng.gen_range(0..t.len())]);
        }
        y = y.mul(&kgens[rng.gen_range(0..kgens.len())].0);
        let lhs = alg.convolve_at(&alg.multiply(f, g)?, h, &y)?;
        let rhs = alg.convolve_at(f, &alg.multiply(g, h)?, &y)?;
        worst = worst.max((lhs - rhs).norm());
        largest = largest.max(lhs.norm());
    }
    let mut r = Row::distance(
        format!(
            "(f*g)*h = f*(g*h) at {ASSOCIATIVITY_POINTS} random points, seed {}",
            cfg.seed
        ),
        worst,
        tol,
    );
    r.computed = format!("{worst:.3e} (largest |value| {largest:.3})");
    rows.push(r);
    if case == Case::Gl2 {
        rows.push(character_symmetry(cfg)?);
    }

    rows.extend(product_confinement(cfg)?);
    Ok(rows)
}

/// `χ(x_η(a)) = χ(x_{1-η}(a))` for all `a` mod p under the normalized character.
pub fn character_symmetry(cfg: &RunConfig) -> Result<Row, Error> {
    let s = cfg.strong()?;
    let sp = s.sp();
    let far = AffineRoot::new(ETA.to_vec(), 0).negate_plus(1);
    let mut worst = 0f64;
    for a in 0..cfg.prime as i64 {
        let near = s.chi(&sp.x(ETA, &int(a)))?;
        let other = s.chi(&sp.x_affine(&far, &int(a))?)?;
        worst = worst.max((near - other).norm());
    }
    Ok(Row::distance(
        "χ(x_η(a)) = χ(x_{1-η}(a)) for all a mod p",
        worst,
        cfg.tolerance.min(1e-9),
    ))
}

/// Cells of `K⁺nK⁺nK⁺` carrying support, for both generators.
pub fn product_confinement(cfg: &RunConfig) -> Result<Vec<Row>, Error> {
    let case = cfg.case();
    let s = cfg.weak()?;
    let mut rows = Vec::new();
    let letters: &[usize] = match case {
        Case::Sl2Gl1 => &[0, 1],
        Case::Gl2 => &[1],
    };
    for &l in letters {
        let n = word_lift(s.sp(), case, &[l]);
        let r = product_coset_classes(&s, &n, &n)?;
        let cand = product_candidates(case, &word_weyl(case, &[l]));
        let cells: Vec<String> = r.supported_cells().iter().map(weyl_label).collect();
        let allowed: Vec<String> = cand.iter().map(weyl_label).collect();
        let name = word_name(case, &[l]);
        rows.push(Row::holds(
            format!(
                "supported cells of K⁺n_{name}K⁺n_{name}K⁺ within the candidates ({} cosets)",
                r.cosets
            ),
            cells.join(" "),
            allowed.join(" "),
            r.confined_to(&cand),
        ));
    }
    Ok(rows)
}

/// Normalized quadratic relations and the word images under `φ`.
pub fn iso(cfg: &RunConfig) -> Result<Vec<Row>, Error> {
    let case = cfg.case();
    let tol = cfg.tolerance;
    let mut alg = HeckeAlgebra::new(cfg.strong()?)?;
    let e = normalized_generators(&mut alg)?;
    let rel = expected_relations(&alg)?;
    let label = legendre_or_trivial(cfg);
    let mut rows = Vec::new();
    for i in 0..2 {
        let name = word_name(case, &[i]);
        let sq = alg.multiply(&e[i], &e[i])?;
        let want = alg.unit().scale(rel[i].c0).add(&e[i].scale(rel[i].c1));
        let mut r = Row::distance(
            format!("e_{name}² = c₀ + c₁ e_{name}, {label}"),
            sq.distance(&want),
            tol,
        );
        r.expected = format!(
            "c₀ = {}, c₁ = {}",
            super::report::format_complex(rel[i].c0),
            super::report::format_complex(rel[i].c1)
        );
        rows.push(r);
    }
    let report = iso_check(&mut alg, cfg.length_bound)?;
    for img in &report.images {
        rows.push(Row::holds(
            format!(
                "φ(t_w) on one double coset with vol = q^(km), w = {}",
                img.name
            ),
            format!(
                "support {}, |coefficient| {:.3}, vol {}, volumes multiply {}",
                img.support_size,
                img.coefficient.norm(),
                img.volume,
                img.volumes_multiply
            ),
            format!("support 1, vol {}", img.expected_volume),
            img.passes(tol),
        ));
    }
    for pc in &report.products {
        rows.push(Row::distance(
            format!(
                "φ(t_u) * φ(t_v) = φ(t_u t_v), u = {}, v = {}",
                word_name(case, &pc.left),
                word_name(case, &pc.right)
            ),
            pc.distance,
            tol,
        ));
    }
    Ok(rows)
}

/// Shapes admitting a common value, against the pairwise rule and the closing list.
pub fn levi(max_rank: usize) -> Vec<Row> {
    let list = |v: &[LeviShape]| {
        let s: Vec<String> = v.iter().map(|s| s.to_string()).collect();
        s.join(", ")
    };
    let mut rows = Vec::new();
    for n in 1..=max_rank {
        let shapes = levi_shapes(n);
        let solved: Vec<LeviShape> = shapes
            .iter()
            .filter(|s| levi_common_point(s).is_some())
            .cloned()
            .collect();
        let pairwise: Vec<LeviShape> = shapes
            .iter()
            .filter(|s| s.admissible_by_dichotomies())
            .cloned()
            .collect();
        let closing: Vec<LeviShape> = shapes
            .iter()
            .filter(|s| s.matches_closing_forms())
            .cloned()
            .collect();
        rows.push(Row::holds(
            format!(
                "Sp({}): common value iff blocks agree and GL(k) next to Sp(2m) has k = 2m",
                2 * n
            ),
            list(&solved),
            list(&pairwise),
            solved == pairwise,
        ));
        rows.push(Row::holds(
            format!(
                "Sp({}): common value iff GL(k)^r × Sp(2k) with k > 1 or GL(1) × Sp(2n-2)",
                2 * n
            ),
            list(&solved),
            list(&closing),
            solved == closing,
        ));
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::reflection;

    #[test]
    fn labels_show_the_action() {
        assert_eq!(weyl_label(&AffineWeylElement::identity(2)), "(x, y)");
        let w = reflection(&AffineRoot::new(DELTA.to_vec(), 0).negate_plus(1));
        assert_eq!(weyl_label(&w), "(1-x, y)");
    }

    #[test]
    fn levi_rows_split_as_expected() {
        let rows = levi(3);
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().step_by(2).all(|r| r.pass));
        assert!(!rows[3].pass, "{:?}", rows[3]);
    }
}
