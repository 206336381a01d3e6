//! Property checks run by the `verify` subcommand. Each check draws its
//! samples from a seeded generator, so runs are reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::affine_plane::{unipotent_fixing, LatticeVector, PiecewiseMap, Point};
use crate::applicability::{check_applicable, ExceptionTag};
use crate::atf_base::{BaseDiagram, Move, Sweep};
use crate::catalog::catalog;
use crate::delzant::{build_blowup_polygon, ConstructionParams};
use crate::exact_arith::QField;
use crate::exec::Exec;
use crate::mcg_homology::{brute_force_classes, find_lemma_classes, omega_eval, H2Class};
use crate::orbit::{classify_level, rho_monotone_check, three_distance, OrbitKind};
use crate::recurrence_map::RecurrenceMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub param_sets: usize,
    pub points: usize,
    pub irrational_iterates: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 7, param_sets: 5, points: 200, irrational_iterates: 10_000 }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random rational in the open interval `(lo, hi)` with denominator `den`
/// times the common denominator of the endpoints.
pub fn rational_between(rng: &mut impl Rng, lo: &QField, hi: &QField, den: i64) -> QField {
    let k = rng.gen_range(1..den);
    lo + &((hi - lo) * QField::from_ratio(k, den))
}

/// Random valid `(a, b, c, eps)` with small rational entries.
pub fn random_params(rng: &mut impl Rng) -> ConstructionParams {
    let b = QField::from_ratio(rng.gen_range(2..17), 4);
    let a = &b + &QField::from_ratio(rng.gen_range(0..13), 4);
    let half_b = &b / &QField::from_int(2);
    let c = rational_between(rng, &QField::zero(), &half_b, 12);
    let room = (&half_b - &c).min(c.clone());
    let eps = rational_between(rng, &QField::zero(), &room, 6);
    ConstructionParams::new(a, b, c, eps).expect("sampled inside the valid range")
}

/// A random rational point of the open blow-up polygon.
pub fn random_interior_point(rng: &mut impl Rng, params: &ConstructionParams) -> Point {
    let (ha, hb) = (params.half_a(), params.half_b());
    loop {
        let x1 = rational_between(rng, &-&ha, &ha, 97);
        let x2 = rational_between(rng, &-&hb, &hb, 89);
        let chop = &x2 - &x1 + &ha + &hb - &params.c;
        if chop.is_positive() {
            return Point::new(x1, x2);
        }
    }
}

/// `min{a/2 - |x1|, b/2 - |x2|, x2 - x1 + (a+b)/2 - c}`.
pub fn closed_form_distance(params: &ConstructionParams, p: &Point) -> QField {
    let (ha, hb) = (params.half_a(), params.half_b());
    let chop = &p.x2 - &p.x1 + &ha + &hb - &params.c;
    (&ha - &p.x1.abs()).min(&hb - &p.x2.abs()).min(chop)
}

fn result(name: &'static str, outcome: Result<String, String>) -> PropertyResult {
    match outcome {
        Ok(detail) => PropertyResult { name, passed: true, detail },
        Err(detail) => PropertyResult { name, passed: false, detail },
    }
}

fn check_distance(o: &SuiteOptions, r: &mut ChaCha8Rng) -> Result<String, String> {
    for _ in 0..o.param_sets {
        let p = random_params(r);
        let poly = build_blowup_polygon(&p).map_err(|e| e.to_string())?;
        for _ in 0..o.points {
            let x = random_interior_point(r, &p);
            let got = poly.distance_to_boundary(&x).map_err(|e| e.to_string())?;
            if got != closed_form_distance(&p, &x) {
                return Err(format!("{x:?} with {p:?}: {got}"));
            }
        }
        if poly.max_distance().0 != p.half_b() {
            return Err(format!("maximum differs from b/2 for {p:?}"));
        }
    }
    Ok(format!("{} parameter sets x {} points", o.param_sets, o.points))
}

fn check_perimeter(o: &SuiteOptions, r: &mut ChaCha8Rng) -> Result<String, String> {
    for _ in 0..o.param_sets * 4 {
        let p = random_params(r);
        let h = rational_between(r, &QField::zero(), &p.c, 13);
        let poly = build_blowup_polygon(&p).map_err(|e| e.to_string())?;
        let got = poly.level_perimeter(&h).map_err(|e| e.to_string())?;
        if got != crate::orbit::perimeter_formula(&p, &h) {
            return Err(format!("h = {h} with {p:?}: {got}"));
        }
    }
    Ok(format!("{} levels", o.param_sets * 4))
}

fn check_recurrence(o: &SuiteOptions, r: &mut ChaCha8Rng) -> Result<String, String> {
    let mut all = vec![ConstructionParams::parse("4", "2", "1/2", "1/4").unwrap()];
    all.extend((0..o.param_sets).map(|_| random_params(r)));
    for p in &all {
        let m = RecurrenceMap::for_params(p).map_err(|e| e.to_string())?;
        let top = &p.c + &p.eps;
        for _ in 0..o.points / 4 {
            let x = random_interior_point(r, p);
            let h = closed_form_distance(p, &x);
            if h > top && m.apply_phi(&x).map_err(|e| e.to_string())? != x {
                return Err(format!("{x:?} moved although above the band"));
            }
        }
    }
    Ok(format!("{} constructions rebuilt and checked", all.len()))
}

fn check_orbits(o: &SuiteOptions) -> Result<String, String> {
    let p = ConstructionParams::parse("4", "2", "1/2", "1/8").unwrap();
    let h = QField::from_ratio(1, 4);
    let rep = classify_level(&p, &h, 0).map_err(|e| e.to_string())?;
    if rep.kind != (OrbitKind::Periodic { q: 39 }) || rep.rho != QField::from_ratio(1, 39) {
        return Err(format!("level 1/4: {rep:?}"));
    }
    let p = ConstructionParams::parse("4", "2", "1/2", "1/4").unwrap();
    let h: QField = "1/8*sqrt(2)".parse().unwrap();
    let rep = classify_level(&p, &h, o.irrational_iterates).map_err(|e| e.to_string())?;
    if rep.kind != OrbitKind::IrrationalCertified {
        return Err(format!("level {h}: {rep:?}"));
    }
    for n in [100, 1000] {
        if !three_distance(&p, &h, n).map_err(|e| e.to_string())? {
            return Err(format!("more than three gaps at n = {n}"));
        }
    }
    Ok(format!("period 39 confirmed and {} irrational iterates distinct", o.irrational_iterates))
}

fn check_monotone(o: &SuiteOptions, r: &mut ChaCha8Rng) -> Result<String, String> {
    for _ in 0..o.param_sets {
        let p = random_params(r);
        if !rho_monotone_check(&p, 100).map_err(|e| e.to_string())? {
            return Err(format!("{p:?}"));
        }
    }
    Ok(format!("{} parameter sets on a 100-point grid", o.param_sets))
}

fn check_classes() -> Result<String, String> {
    let d = H2Class::new(1, -1, 0);
    let expected = vec![d.neg(), d];
    let found = find_lemma_classes(50).map_err(|e| e.to_string())?;
    if found != expected || brute_force_classes(50, Exec::Parallel).map_err(|e| e.to_string())? != expected {
        return Err(format!("{found:?}"));
    }
    let (a, b, c) = (QField::from_int(4), QField::from_int(2), QField::from_ratio(1, 2));
    if omega_eval(d, &a, &b, &c) != &a - &b || !omega_eval(d, &a, &a, &c).is_zero() {
        return Err("areas of the anti-diagonal".into());
    }
    Ok("{(1,-1,0), (-1,1,0)}".into())
}

/// Expected labels for [`crate::catalog::STANDARD_ENTRIES`]: `None` means
/// applicable.
pub const CATALOG_LABELS: &[(&str, Option<ExceptionTag>)] = &[
    ("CP2(3)", Some(ExceptionTag::Monotone)),
    ("MonotoneBlCP2(1)", Some(ExceptionTag::Monotone)),
    ("MonotoneBlCP2(2)", Some(ExceptionTag::Monotone)),
    ("MonotoneBlCP2(3)", Some(ExceptionTag::Monotone)),
    ("S2xS2(1,1)", Some(ExceptionTag::Monotone)),
    ("S2xS2(2,1)", Some(ExceptionTag::ProductUnequal)),
    ("Blowup_S2xS2(4,2,1/2)", None),
    ("Blowup_S2xS2(4,2,1)", Some(ExceptionTag::HalfSizeBlowup1)),
    ("Blowup2_S2xS2(4,2,1)", Some(ExceptionTag::HalfSizeBlowup2)),
    ("HirzebruchF1(3,1/2)", None),
    ("Blowup2_S2xS2(4,2,1/2)", None),
    ("Blowup_S2xS2(3,3,1)", None),
];

fn check_catalog() -> Result<String, String> {
    for (name, want) in CATALOG_LABELS {
        let poly = catalog(name).map_err(|e| e.to_string())?;
        let rep = check_applicable(&poly);
        if rep.applicable != want.is_none() || rep.exception_tag != *want {
            return Err(format!("{name}: {rep:?}"));
        }
    }
    Ok(format!("{} entries", CATALOG_LABELS.len()))
}

fn check_moves(r: &mut ChaCha8Rng) -> Result<String, String> {
    let p = ConstructionParams::parse("4", "2", "1/2", "1/4").unwrap();
    let poly = build_blowup_polygon(&p).map_err(|e| e.to_string())?;
    let d = BaseDiagram::toric(poly).nodal_trade(2, &QField::from_ratio(1, 8)).map_err(|e| e.to_string())?;
    let d = d.nodal_slide(0, &Point::new(QField::from_ratio(3, 2), QField::from_ratio(-1, 2))).map_err(|e| e.to_string())?;
    let d = d.nodal_slide(0, &Point::new(QField::from_ratio(-3, 2), QField::from_ratio(-1, 2))).map_err(|e| e.to_string())?;
    match d.provenance.last() {
        Some(Move::Slide { band, .. }) if band.lo == p.c && band.hi == p.c => {}
        other => return Err(format!("slide band {other:?}")),
    }
    let cut = d.opposite_cut(0, Sweep::Clockwise).map_err(|e| e.to_string())?;
    let (d2, f) = d.cut_transfer(0, &cut, Sweep::Clockwise).map_err(|e| e.to_string())?;
    let back = d2.opposite_cut(0, Sweep::Counterclockwise).map_err(|e| e.to_string())?;
    let (d3, g) = d2.cut_transfer(0, &back, Sweep::Counterclockwise).map_err(|e| e.to_string())?;
    if d3.erase_provenance() != d.erase_provenance() {
        return Err("there-and-back changed the diagram".into());
    }
    let fg = PiecewiseMap::compose(&g, &f);
    for _ in 0..100 {
        let x = random_interior_point(r, &p);
        if fg.apply(&x) != x {
            return Err(format!("there-and-back moves {x:?}"));
        }
    }
    for _ in 0..50 {
        let dir = loop {
            let v = LatticeVector::new(r.gen_range(-30..=30), r.gen_range(-30..=30));
            if !v.is_zero() && v.is_primitive() {
                break v;
            }
        };
        let m = unipotent_fixing(dir, 1).map_err(|e| e.to_string())?;
        if m.det() != 1 || m.trace() != 2 || m.apply_vector(dir) != dir || m.is_identity() {
            return Err(format!("monodromy for {dir:?}: {m:?}"));
        }
    }
    Ok("slide band, transfer round trip, 50 monodromies".into())
}

/// Runs every property and returns one result per property.
pub fn run_suite(o: &SuiteOptions) -> Vec<PropertyResult> {
    let mut r = rng(o.seed);
    vec![
        result("boundary distance closed form and maximum", check_distance(o, &mut r)),
        result("level perimeter formula", check_perimeter(o, &mut r)),
        result("four-round composite and fixed region", check_recurrence(o, &mut r)),
        result("periodic and irrational orbits", check_orbits(o)),
        result("rotation number monotone", check_monotone(o, &mut r)),
        result("homology classes", check_classes()),
        result("catalog labels", check_catalog()),
        result("diagram moves", check_moves(&mut r)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let o = SuiteOptions { param_sets: 2, points: 40, irrational_iterates: 500, ..SuiteOptions::default() };
        for res in run_suite(&o) {
            assert!(res.passed, "{}: {}", res.name, res.detail);
        }
    }

    #[test]
    fn sampled_params_are_valid() {
        let mut r = rng(1);
        for _ in 0..200 {
            let p = random_params(&mut r);
            let x = random_interior_point(&mut r, &p);
            assert!(closed_form_distance(&p, &x).is_positive());
        }
    }
}
