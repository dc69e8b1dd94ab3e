use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use monge::circles::Boundary;
use monge::fuzz::{self, Family, FuzzConfig};
use monge::geom::format_sig;
use monge::instance::InstanceFile;
use monge::metrics::distance;
use monge::render::{circle_scene, gallery_scene, monge_scene, render_scene, Scene, Shape};
use monge::tangents::{external_tangents, pair_admissibility, TangentError};
use monge::{verify_monge, Circle, HPoint, Line, Metric, Point, Rational, Scalar, ScalarMode};

#[derive(Parser)]
#[command(
    name = "monge",
    version,
    about = "Metric circles, external tangents and Monge lines in alpha and L_p planes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distance between two points.
    Dist {
        #[arg(long)]
        metric: String,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        /// Use floating point even when the input is rational.
        #[arg(long)]
        float: bool,
    },
    /// Boundary of a metric circle, or the unit-circle gallery.
    Circle {
        #[arg(long, required_unless_present = "gallery")]
        metric: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "0,0")]
        center: String,
        #[arg(long, default_value = "1")]
        radius: String,
        /// Points printed for curved boundaries.
        #[arg(long, default_value_t = 16)]
        samples: usize,
        #[arg(long)]
        float: bool,
        /// Unit circles of several alpha and L_p metrics (needs --svg).
        #[arg(long, requires = "svg", conflicts_with = "metric")]
        gallery: bool,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Common external tangents of a two-circle instance.
    Tangents(InstanceArgs),
    /// Verifies Monge's theorem on a three-circle instance.
    Monge(InstanceArgs),
    /// Randomized Monge checks.
    Fuzz {
        #[arg(long, default_value = "alpha")]
        family: Family,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Overridden by the MG_SEED environment variable.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        coord_range: i64,
        #[arg(long, default_value_t = 0.5)]
        radius_min: f64,
        #[arg(long, default_value_t = 6.0)]
        radius_max: f64,
    },
}

#[derive(Args)]
struct InstanceArgs {
    instance: PathBuf,
    #[arg(long, conflicts_with = "float")]
    exact: bool,
    #[arg(long)]
    float: bool,
    #[arg(long)]
    svg: Option<PathBuf>,
}

impl InstanceArgs {
    fn mode(&self) -> Option<ScalarMode> {
        match (self.exact, self.float) {
            (true, _) => Some(ScalarMode::Exact),
            (_, true) => Some(ScalarMode::Float),
            _ => None,
        }
    }
}

/// Exit status 1: invalid input.
struct Invalid(String);

impl<E: std::fmt::Display> From<E> for Invalid {
    fn from(e: E) -> Self {
        Invalid(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let result = match cli.command {
        Command::Dist {
            metric,
            from,
            to,
            float,
        } => cmd_dist(&metric, &from, &to, float),
        Command::Circle {
            metric,
            center,
            radius,
            samples,
            float,
            gallery,
            svg,
        } => {
            if gallery {
                write_svg(svg.as_deref(), &gallery_scene()).map(|_| ExitCode::SUCCESS)
            } else {
                let metric = metric.expect("required unless --gallery");
                cmd_circle(&metric, &center, &radius, samples, float, svg.as_deref())
            }
        }
        Command::Tangents(args) => cmd_tangents(&args),
        Command::Monge(args) => cmd_monge(&args),
        Command::Fuzz {
            family,
            trials,
            seed,
            coord_range,
            radius_min,
            radius_max,
        } => cmd_fuzz(family, trials, seed, coord_range, (radius_min, radius_max)),
    };
    result.unwrap_or_else(|Invalid(msg)| {
        eprintln!("error: {msg}");
        ExitCode::from(1)
    })
}

fn show<S: Scalar>(s: &S) -> String {
    if S::is_exact() {
        s.to_string()
    } else {
        format_sig(s.to_float(), 15)
    }
}

fn show_point<S: Scalar>(p: &Point<S>) -> String {
    format!("({}, {})", show(&p.x), show(&p.y))
}

fn show_line<S: Scalar>(l: &Line<S>) -> String {
    format!("{} {} {}", show(l.a()), show(l.b()), show(l.c()))
}

fn show_apex<S: Scalar>(p: &HPoint<S>) -> String {
    match p.to_affine() {
        Some(a) => show_point(&a),
        None => format!("at infinity, direction ({}, {})", show(p.x()), show(p.y())),
    }
}

fn parse_point<S: Scalar>(text: &str) -> Result<Point<S>, Invalid> {
    let (x, y) = text
        .split_once(',')
        .ok_or_else(|| Invalid(format!("expected a point `x,y`, got `{text}`")))?;
    Ok(Point::new(S::parse_text(x)?, S::parse_text(y)?))
}

fn exact_possible(metric: &str, values: &[&str]) -> bool {
    Metric::<Rational>::parse(metric).is_ok()
        && values
            .iter()
            .all(|v| v.split(',').all(|part| Rational::parse_text(part).is_ok()))
}

fn write_svg(path: Option<&Path>, scene: &Scene) -> Result<(), Invalid> {
    if let Some(path) = path {
        std::fs::write(path, render_scene(scene)?)
            .map_err(|e| Invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_dist(metric: &str, from: &str, to: &str, float: bool) -> Result<ExitCode, Invalid> {
    fn run<S: Scalar>(metric: &str, from: &str, to: &str) -> Result<String, Invalid> {
        let m = Metric::<S>::parse(metric)?;
        Ok(show(&distance(&m, &parse_point(from)?, &parse_point(to)?)?))
    }
    let text = if !float && exact_possible(metric, &[from, to]) {
        run::<Rational>(metric, from, to)?
    } else {
        run::<f64>(metric, from, to)?
    };
    println!("{text}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_circle(
    metric: &str,
    center: &str,
    radius: &str,
    samples: usize,
    float: bool,
    svg: Option<&Path>,
) -> Result<ExitCode, Invalid> {
    fn run<S: Scalar>(
        metric: &str,
        center: &str,
        radius: &str,
        samples: usize,
        svg: Option<&Path>,
    ) -> Result<(), Invalid> {
        let c = Circle::new(
            parse_point::<S>(center)?,
            S::parse_text(radius)?,
            Metric::parse(metric)?,
        )?;
        println!("metric: {}", c.metric());
        println!("center: {}", show_point(c.center()));
        println!("radius: {}", show(c.radius()));
        match c.boundary() {
            Boundary::Polygon(poly) => {
                println!("polygon: {} vertices", poly.vertices().len());
                for (v, collinear) in poly.vertices().iter().zip(poly.collinear_flags()) {
                    let flag = if *collinear { " (collinear)" } else { "" };
                    println!("{}{flag}", show_point(v));
                }
            }
            Boundary::Curve(curve) => {
                println!("curve: p = {}, {samples} samples", curve.p);
                for p in curve.sample(samples) {
                    println!("{}", show_point(&p));
                }
            }
        }
        write_svg(svg, &circle_scene(&c))
    }
    if !float && exact_possible(metric, &[center, radius]) {
        run::<Rational>(metric, center, radius, samples, svg)?;
    } else {
        run::<f64>(metric, center, radius, samples, svg)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_tangents(args: &InstanceArgs) -> Result<ExitCode, Invalid> {
    fn run<S: Scalar>(inst: &InstanceFile, svg: Option<&Path>) -> Result<ExitCode, Invalid> {
        let cs = inst.circles::<S>(2)?;
        pair_admissibility(&cs[0], &cs[1])?;
        let pair = match external_tangents(&cs[0], &cs[1]) {
            Ok(pair) => pair,
            Err(e @ (TangentError::NotTangent(_) | TangentError::OracleClusters(_))) => {
                eprintln!("error: {e}");
                return Ok(ExitCode::from(2));
            }
            Err(e) => return Err(e.into()),
        };
        for (i, l) in pair.lines.iter().enumerate() {
            println!("line {}: {}", i + 1, show_line(l));
        }
        println!("apex: {}", show_apex(&pair.apex));
        if svg.is_some() {
            let mut scene = Scene::default();
            for c in &cs {
                scene.push(Shape::Closed(monge::render::circle_outline(c)), "circle");
            }
            for l in &pair.lines {
                scene.push(Shape::InfiniteLine(l.to_f64()), "tangent");
            }
            if let Some(a) = pair.apex.to_affine() {
                scene.push(
                    Shape::Marker {
                        at: a.to_f64(),
                        label: Some("P".to_string()),
                    },
                    "monge-point",
                );
            }
            write_svg(svg, &scene)?;
        }
        Ok(ExitCode::SUCCESS)
    }
    let inst = InstanceFile::load(&args.instance)?;
    match inst.mode(args.mode())? {
        ScalarMode::Exact => run::<Rational>(&inst, args.svg.as_deref()),
        ScalarMode::Float => run::<f64>(&inst, args.svg.as_deref()),
    }
}

fn cmd_monge(args: &InstanceArgs) -> Result<ExitCode, Invalid> {
    fn run<S: Scalar>(inst: &InstanceFile, svg: Option<&Path>) -> Result<ExitCode, Invalid> {
        let cs = inst.circles::<S>(3)?;
        let report = verify_monge(&cs[0], &cs[1], &cs[2])?;
        write_svg(svg, &monge_scene(&report))?;
        println!("{}", serde_json::to_string_pretty(&report.to_json())?);
        Ok(if !report.admissible.is_admissible() {
            ExitCode::from(1)
        } else if report.passed {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(2)
        })
    }
    let inst = InstanceFile::load(&args.instance)?;
    match inst.mode(args.mode())? {
        ScalarMode::Exact => run::<Rational>(&inst, args.svg.as_deref()),
        ScalarMode::Float => run::<f64>(&inst, args.svg.as_deref()),
    }
}

fn cmd_fuzz(
    family: Family,
    trials: usize,
    seed: u64,
    coord_range: i64,
    radius_range: (f64, f64),
) -> Result<ExitCode, Invalid> {
    let seed = match std::env::var("MG_SEED") {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| Invalid(format!("MG_SEED must be an unsigned integer, got `{text}`")))?,
        Err(_) => seed,
    };
    let mut cfg = FuzzConfig::new(family, trials, seed);
    cfg.coord_range = coord_range;
    cfg.radius_range = radius_range;
    let summary = fuzz::run(&cfg)?;
    print!("{}", summary.render());
    Ok(if summary.failure_count() == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}
