//! Acceptance checks. Each criterion prints one PASS or FAIL line, and the
//! process exits non-zero if any fails. The oracles here are written out
//! independently of the library routines they check.

use std::collections::HashSet;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use toric_lpr::affine_plane::{unipotent_fixing, LatticeVector, PiecewiseMap};
use toric_lpr::applicability::check_applicable;
use toric_lpr::atf_base::{build_pi0, BaseDiagram, LevelBand, Move, Sweep, SLID_NODE};
use toric_lpr::catalog::catalog;
use toric_lpr::exec::Exec;
use toric_lpr::mcg_homology::{brute_force_classes, find_lemma_classes, intersection, c1_eval, omega_eval, H2Class};
use toric_lpr::orbit::{classify_level, orbit_arcs, rotation_number, OrbitKind};
use toric_lpr::recurrence_map::{LevelCurve, RecurrenceMap};
use toric_lpr::render::{render_svg, RenderStyle};
use toric_lpr::suite::{random_interior_point, random_params, rational_between, rng, CATALOG_LABELS};
use toric_lpr::{build_blowup_polygon, ConstructionParams, Point, QField};

type Outcome = Result<String, String>;

fn q(s: &str) -> QField {
    s.parse().unwrap()
}

fn qi(n: i64) -> QField {
    QField::from_int(n)
}

fn base() -> ConstructionParams {
    ConstructionParams::parse("4", "2", "1/2", "1/4").unwrap()
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn within(name: &str, start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    if took > limit {
        Err(format!("{name} took {took:?}, limit {limit:?}"))
    } else {
        Ok(())
    }
}

fn oracle_distance(p: &ConstructionParams, x: &Point) -> QField {
    let (ha, hb) = (&p.a / &qi(2), &p.b / &qi(2));
    let d1 = &ha - &x.x1.abs();
    let d2 = &hb - &x.x2.abs();
    let d3 = &(&(&x.x2 - &x.x1) + &(&(&p.a + &p.b) / &qi(2))) - &p.c;
    let mut m = d1;
    for d in [d2, d3] {
        if d < m {
            m = d;
        }
    }
    m
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn is_integer(x: &QField) -> bool {
    QField::from(x.floor()) == *x
}

fn c1_distance() -> Outcome {
    let mut r = rng(101);
    let cases: Vec<_> = (0..20)
        .map(|_| {
            let p = random_params(&mut r);
            let xs: Vec<Point> = (0..1000).map(|_| random_interior_point(&mut r, &p)).collect();
            (p, xs)
        })
        .collect();
    // sampling is excluded from the timed part
    let start = Instant::now();
    for (p, xs) in &cases {
        let poly = build_blowup_polygon(p).map_err(e)?;
        for x in xs {
            let got = poly.distance_to_boundary(x).map_err(e)?;
            let want = oracle_distance(p, x);
            if got != want {
                return Err(format!("at {x} for {p:?}: {got} != {want}"));
            }
        }
    }
    within("distance", start, Duration::from_secs(1))?;
    Ok(format!("20000 points in {:?}", start.elapsed()))
}

fn c2_max() -> Outcome {
    let mut r = rng(102);
    for _ in 0..20 {
        let p = random_params(&mut r);
        let (m, _) = build_blowup_polygon(&p).map_err(e)?.max_distance();
        if m != &p.b / &qi(2) {
            return Err(format!("{p:?}: max {m}"));
        }
    }
    Ok("20 parameter triples".into())
}

fn c3_perimeter() -> Outcome {
    let mut r = rng(103);
    for i in 0..200 {
        let p = random_params(&mut r);
        let h = if i % 10 == 0 { QField::zero() } else { rational_between(&mut r, &QField::zero(), &p.c, 17) };
        let got = build_blowup_polygon(&p).map_err(e)?.level_perimeter(&h).map_err(e)?;
        let want = &(&(&qi(2) * &(&p.a + &p.b)) - &p.c) - &(&qi(7) * &h);
        if got != want {
            return Err(format!("{p:?}, h = {h}: {got} != {want}"));
        }
    }
    Ok("200 levels".into())
}

fn check_round_trip(p: &ConstructionParams) -> Result<usize, String> {
    let m = RecurrenceMap::for_params(p).map_err(e)?;
    let poly = build_blowup_polygon(p).map_err(e)?;
    let mut checked = 0;
    let top = &p.c - &p.eps;
    for i in 0..10 {
        let h = &top * &QField::from_ratio(i, 10);
        let curve = LevelCurve::new(poly.as_polygon(), &h).map_err(e)?;
        let per = curve.perimeter().clone();
        let level = poly.level_set(&h).map_err(e)?;
        if level.len() != 5 {
            return Err(format!("level {h} has {} edges", level.len()));
        }
        let mut edges_hit = HashSet::new();
        for x in curve.sample_points(4) {
            // the edge of the level pentagon that holds x
            let k = (0..5).find(|&k| level.edges()[k].eval(&x).is_zero()).ok_or("sample off the level")?;
            edges_hit.insert(k);
            let y = m.apply_composite(&x);
            if poly.distance_to_boundary(&y).map_err(e)? != h {
                return Err(format!("{x} leaves level {h}"));
            }
            let shift = &(&curve.arc_of(&y).map_err(e)? - &curve.arc_of(&x).map_err(e)?) - &(&p.c - &h);
            if !is_integer(&(&shift / &per)) {
                return Err(format!("{x} on level {h}: advance off by {shift}"));
            }
            checked += 1;
        }
        if edges_hit.len() != 5 {
            return Err(format!("level {h}: samples cover {} edges", edges_hit.len()));
        }
    }
    // round 1 against the explicit strip shear
    let y0 = &p.c - &(&p.b / &qi(2));
    let shear = m.round_shear(0);
    let mut r = rng(7);
    for _ in 0..200 {
        let x = random_interior_point(&mut r, p);
        let want = if x.x2 <= y0 { Point::new(&x.x1 + &(&y0 - &x.x2), x.x2.clone()) } else { x.clone() };
        if shear.apply(&x) != want {
            return Err(format!("round 1 sends {x} to {}", shear.apply(&x)));
        }
    }
    Ok(checked)
}

fn c4_identity() -> Outcome {
    let start = Instant::now();
    let mut r = rng(104);
    let mut sets = vec![base()];
    sets.extend((0..10).map(|_| random_params(&mut r)));
    let mut total = 0;
    for p in &sets {
        total += check_round_trip(p).map_err(|m| format!("{p:?}: {m}"))?;
    }
    within("composite", start, Duration::from_secs(5))?;
    Ok(format!("{} parameter sets, {total} points in {:?}", sets.len(), start.elapsed()))
}

fn c5_fixed() -> Outcome {
    let p = base();
    let m = RecurrenceMap::for_params(&p).map_err(e)?;
    let floor = &p.c + &p.eps;
    let mut r = rng(105);
    let mut n = 0;
    while n < 500 {
        let x = random_interior_point(&mut r, &p);
        if oracle_distance(&p, &x) <= floor {
            continue;
        }
        let y = m.apply_phi(&x).map_err(e)?;
        if y != x || m.apply_composite(&x) != x {
            return Err(format!("{x} moves to {y}"));
        }
        n += 1;
    }
    Ok("500 points above c + eps".into())
}

fn c6_periodic() -> Outcome {
    let p = ConstructionParams::parse("4", "2", "1/2", "1/8").map_err(e)?;
    let h = q("1/4");
    let rho = rotation_number(&p, &h).map_err(e)?;
    if rho != QField::from_ratio(1, 39) {
        return Err(format!("rho = {rho}"));
    }
    let m = RecurrenceMap::for_params(&p).map_err(e)?;
    let x0 = m.level_curve(&h).map_err(e)?.basepoint().clone();
    let mut orbit = vec![x0.clone()];
    for _ in 0..39 {
        let next = m.apply_phi(orbit.last().unwrap()).map_err(e)?;
        orbit.push(next);
    }
    let distinct: HashSet<_> = orbit[..39].iter().collect();
    if distinct.len() != 39 || orbit[39] != x0 {
        return Err(format!("{} distinct, returns: {}", distinct.len(), orbit[39] == x0));
    }
    match classify_level(&p, &h, 1000).map_err(e)?.kind {
        OrbitKind::Periodic { q: 39 } => Ok("rho = 1/39, period 39".into()),
        k => Err(format!("classified as {k:?}")),
    }
}

fn c7_irrational() -> Outcome {
    let start = Instant::now();
    let p = base();
    let h = q("1/8*sqrt(2)");
    let rep = classify_level(&p, &h, 10_000).map_err(e)?;
    if rep.kind != OrbitKind::IrrationalCertified {
        return Err(format!("classified as {:?}", rep.kind));
    }
    let arcs = orbit_arcs(&p, &h, 10_000).map_err(e)?;
    let set: HashSet<_> = arcs.iter().collect();
    if arcs.len() != 10_000 || set.len() != 10_000 {
        return Err(format!("{} distinct of {}", set.len(), arcs.len()));
    }
    let per = &(&(&qi(2) * &(&p.a + &p.b)) - &p.c) - &(&qi(7) * &h);
    for n in [100usize, 1000, 10_000] {
        let mut s = arcs[..n].to_vec();
        s.sort();
        let mut gaps: HashSet<QField> = s.windows(2).map(|w| &w[1] - &w[0]).collect();
        gaps.insert(&(&s[0] + &per) - &s[n - 1]);
        if gaps.len() > 3 {
            return Err(format!("N = {n}: {} gap lengths", gaps.len()));
        }
    }
    within("irrational orbit", start, Duration::from_secs(30))?;
    Ok(format!("10000 distinct iterates, three gaps at N = 100, 1000, 10000 in {:?}", start.elapsed()))
}

fn c8_monotone() -> Outcome {
    let mut r = rng(108);
    let mut sets = vec![base()];
    sets.extend((0..10).map(|_| random_params(&mut r)));
    for p in &sets {
        if &qi(4) * &p.c >= &p.a + &p.b {
            return Err(format!("4c >= a + b for {p:?}"));
        }
        let top = &p.c - &p.eps;
        let rhos = (0..100)
            .map(|i| rotation_number(p, &(&top * &QField::from_ratio(i, 100))))
            .collect::<Result<Vec<_>, _>>()
            .map_err(e)?;
        if rhos.windows(2).any(|w| w[1] >= w[0]) {
            return Err(format!("rho not strictly decreasing for {p:?}"));
        }
    }
    Ok(format!("{} parameter sets on a 100-point grid", sets.len()))
}

fn c9_classes() -> Outcome {
    let want = vec![H2Class::new(-1, 1, 0), H2Class::new(1, -1, 0)];
    let mut got = find_lemma_classes(50).map_err(e)?;
    got.sort();
    let mut brute = brute_force_classes(50, Exec::default()).map_err(e)?;
    brute.sort();
    if got != want || brute != want {
        return Err(format!("found {got:?}, brute force {brute:?}"));
    }
    for x in &want {
        if intersection(*x, *x) != -2 || c1_eval(*x) != 0 {
            return Err(format!("{x:?} fails the conditions"));
        }
    }
    let mut r = rng(109);
    let d = H2Class::new(1, -1, 0);
    for i in 0..20 {
        let mut p = random_params(&mut r);
        if i == 0 {
            p = ConstructionParams::parse("2", "2", "1/2", "1/4").map_err(e)?;
        }
        let area = omega_eval(d, &p.a, &p.b, &p.c);
        let neg = omega_eval(d.neg(), &p.a, &p.b, &p.c);
        if area != &p.a - &p.b || neg != &p.b - &p.a || area.is_zero() != (p.a == p.b) {
            return Err(format!("areas {area}, {neg} for {p:?}"));
        }
    }
    Ok("classes +-(1,-1,0), areas +-(a-b)".into())
}

fn c10_catalog() -> Outcome {
    let mut lines = Vec::new();
    for (name, want) in CATALOG_LABELS {
        let rep = check_applicable(&catalog(name).map_err(e)?);
        if rep.applicable != want.is_none() || rep.exception_tag != *want {
            return Err(format!("{name}: got {rep:?}"));
        }
        lines.push(format!("{name}={}", want.map_or("applicable", |t| t.as_str())));
    }
    Ok(lines.join(" "))
}

fn c11_moves() -> Outcome {
    let mut r = rng(111);
    // slide bands of pi_0 against a dense sample of the swept segment
    for _ in 0..20 {
        let p = random_params(&mut r);
        let d = build_pi0(&p).map_err(e)?;
        let Some(Move::Slide { from, to, band, .. }) = d.provenance.last() else {
            return Err("pi_0 does not end with a slide".into());
        };
        let vals: Vec<QField> =
            (0..=64).map(|i| oracle_distance(&p, &from.lerp(to, &QField::from_ratio(i, 64)))).collect();
        let lo = vals.iter().min().unwrap().clone();
        let hi = vals.iter().max().unwrap().clone();
        if *band != (LevelBand { lo, hi }) {
            return Err(format!("slide band {band:?} for {p:?}"));
        }
        if d.nodes[SLID_NODE].position != *to {
            return Err("slid node is not at the slide target".into());
        }
    }
    // cut transfer there and back
    let p = base();
    let poly = build_blowup_polygon(&p).map_err(e)?;
    let d = BaseDiagram::toric(poly).nodal_trade(2, &q("1/8")).map_err(e)?;
    let d = d.nodal_slide(0, &Point::new(q("3/2"), q("-1/2"))).map_err(e)?;
    let cut = d.opposite_cut(0, Sweep::Clockwise).map_err(e)?;
    let (d2, f) = d.cut_transfer(0, &cut, Sweep::Clockwise).map_err(e)?;
    let back = d2.opposite_cut(0, Sweep::Counterclockwise).map_err(e)?;
    let (d3, g) = d2.cut_transfer(0, &back, Sweep::Counterclockwise).map_err(e)?;
    if d3.erase_provenance() != d.erase_provenance() {
        return Err("there-and-back changed the diagram".into());
    }
    let fg = PiecewiseMap::compose(&g, &f);
    for _ in 0..500 {
        let x = random_interior_point(&mut r, &p);
        if fg.apply(&x) != x {
            return Err(format!("there-and-back moves {x}"));
        }
    }
    // monodromy shape
    for _ in 0..50 {
        let v = loop {
            let v = LatticeVector::new(r.gen_range(-40..=40), r.gen_range(-40..=40));
            if !v.is_zero() && v.is_primitive() {
                break v;
            }
        };
        let m = unipotent_fixing(v, 1).map_err(e)?;
        // M - I sends Z^2 onto the line Z v exactly when M is conjugate to (1 1; 0 1)
        let t: Vec<i64> = [LatticeVector::new(1, 0), LatticeVector::new(0, 1)]
            .into_iter()
            .map(|b| {
                let u = m.apply_vector(b).add(b.neg());
                if u.det(v) != 0 {
                    i64::MAX
                } else {
                    if v.u != 0 {
                    u.u / v.u
                } else {
                    u.v / v.v
                }
                }
            })
            .collect();
        let unit = t.iter().all(|&x| x != i64::MAX) && gcd(t[0], t[1]) == 1;
        if m.det() != 1 || m.trace() != 2 || m.apply_vector(v) != v || !unit {
            return Err(format!("monodromy about {v:?}: {m:?}"));
        }
    }
    Ok("20 slide bands, transfer round trip on 500 points, 50 monodromies".into())
}

fn c12_render() -> Outcome {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/pi0.svg");
    let golden = std::fs::read_to_string(&path).map_err(|err| format!("{}: {err}", path.display()))?;
    let d = build_pi0(&base()).map_err(e)?;
    let style = RenderStyle { show_levels: vec![q("1/4")], ..RenderStyle::default() };
    let svg = render_svg(&d, &style);
    if svg != golden || render_svg(&d, &style) != svg {
        return Err("output differs from the golden file".into());
    }
    let nodes = svg.matches("class=\"node\"").count();
    let cuts = svg.matches("class=\"cut\"").count();
    let level = svg.lines().find(|l| l.contains("class=\"level\"")).ok_or("no level polygon")?;
    let pts = level.split("points=\"").nth(1).and_then(|s| s.split('"').next()).unwrap_or("");
    if nodes != 5 || cuts != 5 || pts.split(' ').count() != 5 {
        return Err(format!("{nodes} nodes, {cuts} cuts, level {pts}"));
    }
    Ok("golden match, 5 nodes, 5 cuts, level pentagon".into())
}

fn main() -> ExitCode {
    let checks: [(&str, fn() -> Outcome); 12] = [
        ("closed-form boundary distance", c1_distance),
        ("maximum distance b/2", c2_max),
        ("level perimeter", c3_perimeter),
        ("composite advances arcs by c - h", c4_identity),
        ("identity above c + eps", c5_fixed),
        ("periodic orbit at h = 1/4", c6_periodic),
        ("irrational orbit at h = sqrt(2)/8", c7_irrational),
        ("rotation number monotone", c8_monotone),
        ("homology class enumeration", c9_classes),
        ("applicability catalog", c10_catalog),
        ("diagram moves", c11_moves),
        ("golden SVG", c12_render),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", checks.len() - failed, checks.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
