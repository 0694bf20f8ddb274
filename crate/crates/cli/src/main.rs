//! `intapprox`: command-line driver for the integral approximation experiments.

mod svg;

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use intapprox::arith::pell_fundamental;
use intapprox::curves::{Family, Line};
use intapprox::delpezzo6::{
    count_n, enumerate_region, family_points, figure_data, fold_integral, on_lines,
    strong_approx_lift, target, Region, ResidueClass,
};
use intapprox::metrics::{
    dp6_distance, dp6_height, estimate_alpha, predicted_alpha, AlphaConfig, LiouvilleAccumulator,
    LiouvilleExponent, P1xP1Point, PointRow,
};
use intapprox::toric::{
    cartier_data, default_target, primitive_collections, toric_alpha_experiment, validate_fan,
    ExperimentConfig, Fan, FanFile,
};
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};

use crate::svg::Scatter;

#[derive(Parser)]
#[command(name = "intapprox", version, about = "Integral Diophantine approximation experiments")]
struct Cli {
    /// Worker threads for enumerations (default: one per core).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fundamental solution of m^2 - d n^2 = 1, printed as "m n".
    Pell {
        #[arg(long)]
        d: u64,
    },
    /// The degree-6 del Pezzo case study.
    #[command(subcommand)]
    Dp6(Dp6Command),
    /// Split toric varieties given by fan files.
    #[command(subcommand)]
    Toric(ToricCommand),
}

#[derive(Args)]
struct Bound {
    #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
    height_bound: i64,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    Line1,
    Line2,
    Conic,
    Nodal,
    Cuspidal,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: FamilyKind,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    a: i64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    b: i64,
}

impl FamilyArgs {
    fn family(&self) -> Family {
        let (a, b) = (self.a, self.b);
        match self.family {
            FamilyKind::Line1 => Family::Line(Line::L1),
            FamilyKind::Line2 => Family::Line(Line::L2),
            FamilyKind::Conic => Family::Conic { a, b },
            FamilyKind::Nodal => Family::Nodal { a, b },
            FamilyKind::Cuspidal => Family::Cuspidal { a, b },
        }
    }
}

#[derive(Subcommand)]
enum Dp6Command {
    /// All integral points up to the height bound, as CSV.
    Enumerate {
        #[command(flatten)]
        bound: Bound,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// An integral point in a residue class modulo q.
    Lift {
        #[arg(long)]
        modulus: i64,
        /// Residues of s0, s1, t0, t1.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        residue: Vec<i64>,
    },
    /// Number of integral points on a curve family up to the height bound.
    Count {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        bound: Bound,
    },
    /// Point clouds near the target: 1 for the chart picture, 2 for ratios.
    Figures {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        #[command(flatten)]
        bound: Bound,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Approximation constant of the target along a curve family.
    Alpha {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        bound: Bound,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dyadic-window minima of d^e H over integral points with d < 1/2.
    Liouville {
        #[command(flatten)]
        bound: Bound,
        /// 1 for all points, 2 for points off the two lines.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=2))]
        exponent: u32,
    },
}

#[derive(Subcommand)]
enum ToricCommand {
    /// Validates a fan file.
    Check { fan: PathBuf },
    /// Primitive collections, central ones first.
    Collections { fan: PathBuf },
    /// Degree of the registered ample class on a central collection.
    Delta {
        fan: PathBuf,
        /// Index into the list of central collections.
        #[arg(long)]
        collection: usize,
    },
    /// Approximation experiment near the boundary divisor of one ray.
    Alpha {
        fan: PathBuf,
        /// Defaults to the file's `boundary_rays`.
        #[arg(long)]
        boundary_ray: Option<usize>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        height_bound: u64,
    },
}

/// Failures split by exit code: bad input (2) or internal (1).
#[derive(Debug)]
enum Failure {
    Invalid(String),
    Internal(String),
}

impl From<intapprox::Error> for Failure {
    fn from(e: intapprox::Error) -> Self {
        use intapprox::Error as E;
        match e {
            E::VerificationFailed { .. } | E::SearchExhausted { .. } => Failure::Internal(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let mut buf = Vec::new();
    let res = pool.install(|| run(cli.command, &mut buf));
    // output printed before a failure is still shown
    let mut out = BufWriter::new(io::stdout().lock());
    let res = out
        .write_all(&buf)
        .and_then(|()| out.flush())
        .map_err(Failure::from)
        .and(res);
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Pell { d } => {
            let p = pell_fundamental(d)?;
            writeln!(out, "{} {}", p.m(), p.n())?;
            Ok(())
        }
        Command::Dp6(c) => dp6(c, out),
        Command::Toric(c) => toric(c, out),
    }
}

fn write_rows(rows: &[PointRow], path: Option<&Path>, out: &mut dyn Write) -> Outcome {
    match path {
        Some(p) => {
            let mut w = csv::Writer::from_path(p)?;
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
            writeln!(out, "wrote {} rows to {}", rows.len(), p.display())?;
        }
        None => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn row(x: &P1xP1Point, h: i64, y: &P1xP1Point) -> PointRow {
    PointRow::new(y, &h, &dp6_distance(x, y))
}

fn dp6(cmd: Dp6Command, out: &mut dyn Write) -> Outcome {
    let x = target();
    match cmd {
        Dp6Command::Enumerate { bound, out: path } => {
            let rows: Vec<PointRow> = enumerate_region(bound.height_bound, &Region::All)
                .iter()
                .map(|(h, y)| row(&x, *h, y))
                .collect();
            write_rows(&rows, path.as_deref(), out)
        }
        Dp6Command::Lift { modulus, residue } => {
            let [a0, a1, b0, b1] = residue[..] else {
                return Err(Failure::Invalid("expected four residues".into()));
            };
            let class = ResidueClass::new(modulus, a0, a1, b0, b1)?;
            let c = strong_approx_lift(&class)?;
            let y = P1xP1Point::from_coords(c[0], c[1], c[2], c[3])?;
            writeln!(out, "{} {} {} {}", c[0], c[1], c[2], c[3])?;
            writeln!(out, "point {y} height {}", dp6_height(&y))?;
            Ok(())
        }
        Dp6Command::Count { family, bound } => {
            let f = family.family();
            f.param()?;
            let n = count_n(&f, bound.height_bound)?;
            writeln!(out, "{f} {} {n}", bound.height_bound)?;
            Ok(())
        }
        Dp6Command::Figures {
            which,
            bound,
            out: path,
            svg,
        } => {
            let rows = figure_data(bound.height_bound, &x);
            if let Some(p) = svg {
                fs::write(&p, figure_svg(which, bound.height_bound, &rows).render())?;
                writeln!(out, "wrote {}", p.display())?;
            }
            write_rows(&rows, path.as_deref(), out)
        }
        Dp6Command::Alpha {
            family,
            bound,
            out: path,
        } => {
            let f = family.family();
            let pts = family_points(&f, bound.height_bound)?;
            let samples: Vec<(i64, Ratio<i64>)> = pts
                .iter()
                .map(|(h, y)| (*h, dp6_distance(&x, y)))
                .filter(|(_, d)| *d != Ratio::from_integer(0))
                .collect();
            let est = estimate_alpha(samples, &AlphaConfig::default())?;
            writeln!(out, "family {f}")?;
            writeln!(out, "points {}", pts.len())?;
            writeln!(out, "estimate {:.2}", est.ratio_sup)?;
            writeln!(out, "ratio_sup {:.6}", est.ratio_sup)?;
            writeln!(out, "frontier_slope {:.6}", est.frontier_slope)?;
            writeln!(out, "predicted {}", predicted_alpha(&f.meta()?))?;
            if let Some(p) = path {
                let rows: Vec<PointRow> = pts.iter().map(|(h, y)| row(&x, *h, y)).collect();
                write_rows(&rows, Some(&p), out)?;
            }
            Ok(())
        }
        Dp6Command::Liouville { bound, exponent } => {
            let e = LiouvilleExponent::integer(exponent)?;
            let region = Region::Near {
                target: x.clone(),
                below: Ratio::new(1, 2),
            };
            let acc = fold_integral(
                bound.height_bound,
                &region,
                || LiouvilleAccumulator::new(e),
                |acc, y, h| {
                    if exponent == 2 && on_lines(y) {
                        return;
                    }
                    let d = dp6_distance(&x, y);
                    acc.push(
                        &BigInt::from(h),
                        &BigRational::new((*d.numer()).into(), (*d.denom()).into()),
                    );
                },
                LiouvilleAccumulator::merge,
            );
            writeln!(out, "window min exact")?;
            for w in acc.windows() {
                writeln!(out, "{} {:.6} {}", w.k, w.value(), w.exact)?;
            }
            Ok(())
        }
    }
}

fn figure_svg(which: u8, bound: i64, rows: &[PointRow]) -> Scatter {
    let num = |s: &str| s.parse::<f64>().unwrap_or(f64::NAN);
    if which == 1 {
        Scatter {
            title: format!("integral points of height at most {bound} near x"),
            x_label: "s0/s1".into(),
            y_label: "t0/t1".into(),
            log_x: false,
            points: rows
                .iter()
                .map(|r| (num(&r.s0) / num(&r.s1), num(&r.t0) / num(&r.t1)))
                .filter(|(a, b)| a.is_finite() && b.is_finite())
                .collect(),
        }
    } else {
        Scatter {
            title: format!("ratio -log H / log d, height at most {bound}"),
            x_label: "H".into(),
            y_label: "-log H / log d".into(),
            log_x: true,
            points: rows
                .iter()
                .filter(|r| !r.ratio.is_empty())
                .map(|r| (num(&r.h), num(&r.ratio)))
                .collect(),
        }
    }
}

fn load(path: &Path) -> Result<FanFile, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    Ok(FanFile::from_toml(&text)?)
}

fn load_fan(path: &Path) -> Result<(FanFile, Fan), Failure> {
    let file = load(path)?;
    let fan = Fan::new(file.dim, file.rays.clone(), file.max_cones.clone())?;
    Ok((file, fan))
}

fn fmt_set(s: &[usize]) -> String {
    let v: Vec<String> = s.iter().map(|r| r.to_string()).collect();
    format!("{{{}}}", v.join(", "))
}

fn toric(cmd: ToricCommand, out: &mut dyn Write) -> Outcome {
    match cmd {
        ToricCommand::Check { fan } => {
            let file = load(&fan)?;
            let f = file.fan();
            let v = validate_fan(&f);
            if !v.is_empty() {
                for x in &v {
                    writeln!(out, "violation: {x}")?;
                }
                return Err(Failure::Invalid(format!("{} fan violation(s)", v.len())));
            }
            writeln!(
                out,
                "ok: dim {}, {} rays, {} maximal cones, picard rank {}",
                f.dim,
                f.nrays(),
                f.max_cones.len(),
                f.picard_rank()?
            )?;
            if let Some(l) = file.line_bundle() {
                let c = cartier_data(&f, &l)?;
                writeln!(out, "line bundle {:?}: nef {}, ample {}", l.coeffs, c.nef, c.ample)?;
            }
            Ok(())
        }
        ToricCommand::Collections { fan } => {
            let (_, f) = load_fan(&fan)?;
            let pc = primitive_collections(&f);
            for p in &pc.central {
                writeln!(out, "central {}", fmt_set(p))?;
            }
            for p in &pc.other {
                writeln!(out, "other {}", fmt_set(p))?;
            }
            Ok(())
        }
        ToricCommand::Delta { fan, collection } => {
            let (file, f) = load_fan(&fan)?;
            let l = file
                .line_bundle()
                .ok_or_else(|| Failure::Invalid("fan file has no ample class".into()))?;
            let pc = primitive_collections(&f);
            let p = pc.central.get(collection).ok_or_else(|| {
                Failure::Invalid(format!(
                    "collection {collection} out of range ({} central)",
                    pc.central.len()
                ))
            })?;
            let d = intapprox::toric::delta_p(&f, &l, p)?;
            writeln!(out, "delta {} {d}", fmt_set(p))?;
            Ok(())
        }
        ToricCommand::Alpha {
            fan,
            boundary_ray,
            height_bound,
        } => {
            let (file, f) = load_fan(&fan)?;
            let l = file
                .line_bundle()
                .ok_or_else(|| Failure::Invalid("fan file has no ample class".into()))?;
            let star = match (boundary_ray, &file.boundary_rays) {
                (Some(r), _) => r,
                (None, Some(rs)) if rs.len() == 1 => rs[0],
                _ => return Err(Failure::Invalid("give --boundary-ray".into())),
            };
            if star >= f.nrays() {
                return Err(Failure::Invalid(format!("no ray {star}")));
            }
            let x = default_target(&f, star);
            let r = toric_alpha_experiment(&f, &l, &[star], &x, height_bound, &ExperimentConfig::default())?;
            writeln!(out, "boundary ray {star}")?;
            writeln!(out, "target {x}")?;
            writeln!(out, "chart {}", fmt_set(&r.chart))?;
            writeln!(out, "simplicial {}", r.simplicial)?;
            writeln!(out, "delta {}", r.delta)?;
            writeln!(out, "near points {}", r.near_points)?;
            writeln!(out, "estimate {:.2}", r.estimate.ratio_sup)?;
            writeln!(out, "ratio_sup {:.6}", r.estimate.ratio_sup)?;
            writeln!(out, "frontier_slope {:.6}", r.estimate.frontier_slope)?;
            if !r.simplicial {
                writeln!(out, "note: pseudoeffective cone is not simplicial; delta is not a prediction")?;
            }
            writeln!(out, "window min")?;
            for w in &r.windows {
                writeln!(out, "{} {:.6}", w.k, w.value())?;
            }
            Ok(())
        }
    }
}
