//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use monge::circles::{unit_circle_vertices, Boundary};
use monge::fuzz::{self, Family, FuzzConfig};
use monge::geom::{orient, projective_distance};
use monge::metrics::distance;
use monge::monge::{monge_points, MongeCoefficients};
use monge::render::count_class;
use monge::tangents::homothety_center;
use monge::{verify_monge, Circle, HPoint, Metric, Point, Rational, Scalar};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

fn rq(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn worked<S: Scalar>(metric: Metric<S>) -> [Circle<S>; 3] {
    let c = |x: i64, y: i64, r: i64| {
        Circle::new(
            Point::new(S::from_int(x), S::from_int(y)),
            S::from_int(r),
            metric.clone(),
        )
        .unwrap()
    };
    [c(0, 0, 1), c(6, 0, 2), c(0, 6, 3)]
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("runtime {elapsed:?} exceeds {limit:?}"))
    }
}

/// External center of similitude `(r_j·M_i − r_i·M_j) / (r_j − r_i)`.
fn similitude_center(mi: (i64, i64), ri: i64, mj: (i64, i64), rj: i64) -> HPoint<Rational> {
    HPoint::new(
        q(rj * mi.0 - ri * mj.0),
        q(rj * mi.1 - ri * mj.1),
        q(rj - ri),
    )
    .unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let [c1, c2, c3] = worked(Metric::alpha_k(rq(3, 2)).unwrap());
    let points = monge_points(&c1, &c2, &c3).map_err(|e| e.to_string())?;
    let expected = [(-6, 0), (0, -3), (18, -12)];
    for (p, (x, y)) in points.iter().zip(expected) {
        let affine = p.to_affine().ok_or("Monge point at infinity")?;
        if affine != Point::new(q(x), q(y)) {
            return Err(format!("Monge point {affine:?} != ({x}, {y})"));
        }
    }
    let oracle = [
        similitude_center((0, 0), 1, (6, 0), 2),
        similitude_center((0, 0), 1, (0, 6), 3),
        similitude_center((6, 0), 2, (0, 6), 3),
    ];
    if !points
        .iter()
        .zip(&oracle)
        .all(|(p, o)| p.projectively_eq(o))
    {
        return Err("closed form disagrees with similitude centers".into());
    }
    let d = MongeCoefficients::new(&c1, &c2, &c3).map_err(|e| e.to_string())?;
    if (d.d_x.clone(), d.d_y.clone(), d.d_xyr.clone()) != (q(12), q(-6), q(36)) {
        return Err(format!("coefficients ({}, {}, {})", d.d_x, d.d_y, d.d_xyr));
    }
    let line = d.line().map_err(|e| e.to_string())?;
    for x in [-6, 0, 4, 18] {
        let y = rq(-x, 2) - q(3);
        if line.eval(&Point::new(q(x), y)) != q(0) {
            return Err("line is not y = -x/2 - 3".into());
        }
    }
    within(start.elapsed(), Duration::from_millis(100))?;
    Ok("points (-6,0) (0,-3) (18,-12); D_x=12 D_y=-6 D_xyr=36".into())
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut details = Vec::new();
    for text in ["alpha-k:3/2", "alpha-k:2", "lp:1", "lp:inf"] {
        let cs = worked(Metric::<Rational>::parse(text).unwrap());
        let report = verify_monge(&cs[0], &cs[1], &cs[2]).map_err(|e| e.to_string())?;
        for (k, t) in report.apexes_tangent.iter().enumerate() {
            let t = t.as_ref().ok_or(format!(
                "{text}: tangent construction failed: {:?}",
                report.notes
            ))?;
            if !t.projectively_eq(&report.apexes_closed[k]) {
                return Err(format!("{text}: tangent apex {k} differs from closed form"));
            }
        }
        if !report.passed {
            return Err(format!("{text}: report FAIL"));
        }
        details.push(format!("{text} exact"));
    }
    for text in ["lp:2", "lp:3"] {
        let cs = worked(Metric::<f64>::parse(text).unwrap());
        let report = verify_monge(&cs[0], &cs[1], &cs[2]).map_err(|e| e.to_string())?;
        let mut worst: f64 = 0.0;
        for (k, t) in report.apexes_tangent.iter().enumerate() {
            let t = t
                .as_ref()
                .ok_or(format!("{text}: tangent construction failed"))?;
            worst = worst.max(projective_distance(t, &report.apexes_closed[k]));
        }
        if worst >= 1e-9 || !report.passed {
            return Err(format!("{text}: apex distance {worst:.3e}"));
        }
        details.push(format!("{text} {worst:.1e}"));
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(details.join(", "))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut details = Vec::new();
    for (family, seed) in [
        (Family::Alpha, 42),
        (Family::Lp, 7),
        (Family::Euclidean, 42),
    ] {
        let summary = fuzz::run(&FuzzConfig::new(family, 1000, seed)).map_err(|e| e.to_string())?;
        if summary.failure_count() != 0 {
            return Err(format!(
                "{family}: {} failures\n{}",
                summary.failure_count(),
                summary.render()
            ));
        }
        let worst = summary
            .max_collinearity_tangent()
            .max(summary.max_collinearity_closed());
        if worst >= 1e-9 {
            return Err(format!("{family}: collinearity residual {worst:.3e}"));
        }
        details.push(format!("{family} max collinearity {worst:.1e}"));
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "3000 trials, 0 failures; {} in {:.1?}",
        details.join(", "),
        start.elapsed()
    ))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let rational =
        |rng: &mut ChaCha8Rng, lo: i64| rq(rng.gen_range(lo..=100), rng.gen_range(1..=12));
    let (mut checked, mut skipped) = (0, 0);
    for _ in 0..10_000 {
        let mut circle = || {
            let center = Point::new(rational(&mut rng, -100), rational(&mut rng, -100));
            Circle::new(center, rational(&mut rng, 1), Metric::taxicab()).unwrap()
        };
        let (c1, c2, c3) = (circle(), circle(), circle());
        match monge_points(&c1, &c2, &c3) {
            Ok([p12, p13, p23]) => {
                if orient(&p12, &p13, &p23) != q(0) {
                    return Err(format!("orient != 0 for {c1:?} {c2:?} {c3:?}"));
                }
                checked += 1;
            }
            Err(_) => skipped += 1,
        }
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!(
        "{checked} tuples exactly collinear, {skipped} coincident-circle tuples skipped"
    ))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let den = rng.gen_range(1..=1000);
        let k = rq(den + rng.gen_range(1..=den), den);
        let inv = q(1) / k.clone();
        let listed = [
            (q(1), q(0)),
            (inv.clone(), inv.clone()),
            (q(0), q(1)),
            (-inv.clone(), inv.clone()),
            (q(-1), q(0)),
            (-inv.clone(), -inv.clone()),
            (q(0), q(-1)),
            (inv.clone(), -inv.clone()),
        ];
        let vertices = unit_circle_vertices(&k).map_err(|e| e.to_string())?;
        let metric = Metric::alpha_k(k.clone()).unwrap();
        for (v, (x, y)) in vertices.iter().zip(listed) {
            if *v != Point::new(x, y) {
                return Err(format!("k = {k}: vertex {v:?}"));
            }
            let d = distance(&metric, &Point::origin(), v).unwrap();
            if d != q(1) {
                return Err(format!("k = {k}: d(O, {v:?}) = {d}"));
            }
        }
    }
    let k = monge::metrics::k_from_angle(std::f64::consts::FRAC_PI_4).unwrap();
    let a2 = unit_circle_vertices(&k).unwrap()[1].clone();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let err = (a2.x - h).abs().max((a2.y - h).abs());
    if err > 1e-12 {
        return Err(format!("alpha = pi/4 vertex off by {err:.3e}"));
    }
    Ok(format!(
        "20 rational k match A1..A8 with unit distance; pi/4 vertex error {err:.1e}"
    ))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let taxicab = Metric::<Rational>::taxicab();
    let l1 = Metric::<Rational>::lp(1.0).unwrap();
    for _ in 0..10_000 {
        let mut p = || {
            Point::new(
                rq(rng.gen_range(-500..=500), rng.gen_range(1..=30)),
                rq(rng.gen_range(-500..=500), rng.gen_range(1..=30)),
            )
        };
        let (a, b) = (p(), p());
        if distance(&taxicab, &a, &b).unwrap() != distance(&l1, &a, &b).unwrap() {
            return Err(format!("alpha k=2 differs from l1 at {a:?} {b:?}"));
        }
    }
    let l2 = Metric::<f64>::lp(2.0).unwrap();
    let mut worst_l2: f64 = 0.0;
    for _ in 0..10_000 {
        let mut p = || Point::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let (a, b) = (p(), p());
        let gap =
            (distance(&l2, &a, &b).unwrap() - distance(&Metric::Euclidean, &a, &b).unwrap()).abs();
        worst_l2 = worst_l2.max(gap);
    }
    if worst_l2 > 1e-12 {
        return Err(format!("l2 vs Euclidean gap {worst_l2:.3e}"));
    }
    let l60 = Metric::<f64>::lp(60.0).unwrap();
    let mut worst_60: f64 = 0.0;
    for _ in 0..10_000 {
        let mut p = || Point::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        let (a, b) = (p(), p());
        let gap =
            (distance(&l60, &a, &b).unwrap() - distance(&Metric::max(), &a, &b).unwrap()).abs();
        worst_60 = worst_60.max(gap);
    }
    let detail = format!("alpha k=2 == l1 on 10^4 rational pairs; l2 gap {worst_l2:.1e}; l60 vs max gap {worst_60:.3e}");
    if worst_60 > 1e-7 {
        return Err(format!("{detail} (limit 1e-7)"));
    }
    Ok(detail)
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    while done < 100 {
        let metric = match rng.gen_range(0..3) {
            0 => {
                let den = rng.gen_range(1..=20);
                Metric::alpha_k(rq(den + rng.gen_range(1..=den), den)).unwrap()
            }
            1 => Metric::lp(1.0).unwrap(),
            _ => Metric::max(),
        };
        let circle = |rng: &mut ChaCha8Rng| {
            let center = Point::new(
                rq(rng.gen_range(-60..=60), rng.gen_range(1..=4)),
                rq(rng.gen_range(-60..=60), rng.gen_range(1..=4)),
            );
            Circle::new(
                center,
                rq(rng.gen_range(1..=40), rng.gen_range(1..=8)),
                metric.clone(),
            )
            .unwrap()
        };
        let (ci, cj) = (circle(&mut rng), circle(&mut rng));
        if ci.radius() == cj.radius() {
            continue;
        }
        let apex = homothety_center(&ci, &cj).map_err(|e| e.to_string())?;
        let p = apex
            .to_affine()
            .ok_or("finite apex expected for distinct radii")?;
        let ratio = cj.radius().clone() / ci.radius().clone();
        let (Boundary::Polygon(pi), Boundary::Polygon(pj)) = (ci.boundary(), cj.boundary()) else {
            return Err("polygonal boundary expected".into());
        };
        for (vi, vj) in pi.vertices().iter().zip(pj.vertices()) {
            let image = p.add(&vi.sub(&p).scale(&ratio));
            if image != *vj {
                return Err(format!("vertex {vi:?} maps to {image:?}, expected {vj:?}"));
            }
        }
        done += 1;
    }
    Ok("100 polygonal pairs map vertex to vertex exactly".into())
}

fn run_cli(args: &[&str]) -> Result<std::process::Output, String> {
    Command::new(env!("CARGO_BIN_EXE_monge"))
        .args(args)
        .env_remove("MG_SEED")
        .output()
        .map_err(|e| e.to_string())
}

fn criterion_8() -> Outcome {
    let a = run_cli(&["fuzz", "--trials", "100", "--seed", "42"])?;
    let b = run_cli(&["fuzz", "--trials", "100", "--seed", "42"])?;
    if !a.status.success() || a.stdout.is_empty() {
        return Err(format!("fuzz exited with {}", a.status));
    }
    if a.stdout != b.stdout || a.stderr != b.stderr {
        return Err("fuzz output differs between runs".into());
    }

    let dir = std::env::temp_dir().join(format!("monge-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let path = |name: &str| dir.join(name).to_string_lossy().into_owned();
    let instance = path("worked.json");
    std::fs::write(
        &instance,
        r#"{"metric":"alpha-k:3/2","scalar_mode":"exact","circles":[{"cx":"0","cy":"0","r":"1"},{"cx":"6","cy":"0","r":"2"},{"cx":"0","cy":"6","r":"3"}]}"#,
    )
    .map_err(|e| e.to_string())?;
    let runs: [(Vec<String>, String); 3] = [
        (
            vec![
                "circle".into(),
                "--metric".into(),
                "alpha-k:2".into(),
                "--svg".into(),
                path("taxicab.svg"),
            ],
            path("taxicab.svg"),
        ),
        (
            vec![
                "circle".into(),
                "--gallery".into(),
                "--svg".into(),
                path("gallery.svg"),
            ],
            path("gallery.svg"),
        ),
        (
            vec!["monge".into(), instance, "--svg".into(), path("monge.svg")],
            path("monge.svg"),
        ),
    ];
    let mut svgs = Vec::new();
    for (args, out) in &runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = run_cli(&args)?;
        let first_svg = std::fs::read_to_string(out).map_err(|e| e.to_string())?;
        run_cli(&args)?;
        let second_svg = std::fs::read_to_string(out).map_err(|e| e.to_string())?;
        if !first.status.success() || first_svg != second_svg {
            return Err(format!("{} not deterministic or failed", args.join(" ")));
        }
        svgs.push(first_svg);
    }
    let _ = std::fs::remove_dir_all(&dir);

    let path_vertices = svgs[0]
        .lines()
        .find(|l| l.starts_with("<path"))
        .map(|l| l.matches(['M', 'L']).count())
        .unwrap_or(0);
    let counts = [
        (count_class(&svgs[0], "circle"), 1),
        (path_vertices, 4),
        (count_class(&svgs[1], "circle"), 7),
        (count_class(&svgs[2], "circle"), 3),
        (count_class(&svgs[2], "tangent"), 6),
        (count_class(&svgs[2], "monge-line"), 1),
        (count_class(&svgs[2], "monge-point"), 3),
    ];
    if counts.iter().any(|(got, want)| got != want) {
        return Err(format!("SVG counts (got, want): {counts:?}"));
    }
    Ok("fuzz output byte-identical; SVG counts 1 path/4 vertices, 7 paths, 3+6+1+3".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("worked Monge triple", criterion_1),
        ("two-path agreement", criterion_2),
        ("fuzz suites", criterion_3),
        ("algebraic identity", criterion_4),
        ("unit-circle fidelity", criterion_5),
        ("metric degenerations", criterion_6),
        ("homothety property", criterion_7),
        ("CLI determinism", criterion_8),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!(
                "criterion {}: PASS {name} ({detail}) [{elapsed:.2?}]",
                n + 1
            ),
            Err(detail) => {
                failed += 1;
                println!(
                    "criterion {}: FAIL {name} ({detail}) [{elapsed:.2?}]",
                    n + 1
                );
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
