use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use planecurves::carnot::{
    carnot_value, check_carnot, construct_curve, smooth_representative, solve_last_coordinate,
    CarnotValue,
};
use planecurves::construct::{construct, ConstructionRequest};
use planecurves::error::Result;
use planecurves::field::Field;
use planecurves::geometry::DivisorOnLine;
use planecurves::io::{
    CarnotInstanceDto, CertificateDto, CurveDivisorDto, FieldDto, LineDto, LinePointDto, PointDto,
    ReportDto, TernaryFormDto,
};
use planecurves::linsys::{
    analyze, decompose_r, hartshorne_max_dim, n_lower_bound, SystemPresentation,
};

#[derive(Parser)]
#[command(name = "planecurves", about = "Plane curve linear systems: bounds, criteria, constructions")]
struct Cli {
    /// Worker threads (accepted for compatibility; computations are exact
    /// and run single-threaded)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutArg {
    /// Write JSON here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal degree n(r) of a base point free very special non-trivial g^r_n
    Bounds {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        r: i64,
    },
    /// Maximal dimension of a g^r_n on a smooth plane curve of degree d
    Hartshorne {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        n: i64,
    },
    /// Table of n(r) for all admissible r at degree d
    Table {
        #[arg(long)]
        d: i64,
    },
    /// Unique decomposition r = (x+1)(x+2)/2 - beta
    Decompose {
        #[arg(long)]
        r: i64,
    },
    /// Product/sum criteria for prescribed divisors on three lines
    Carnot {
        #[command(subcommand)]
        cmd: CarnotCmd,
    },
    /// Linear system analysis on a smooth plane curve
    Linsys {
        #[command(subcommand)]
        cmd: LinsysCmd,
    },
    /// Build and certify a non-trivial very special system of minimal degree
    Construct {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        x: usize,
        #[arg(long)]
        beta: usize,
        /// Field characteristic
        #[arg(long)]
        p: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Re-run certification from an emitted certificate
    Verify {
        /// Certificate JSON path, or - for stdin
        path: String,
    },
    /// Quick install sanity checks
    Selftest,
}

#[derive(Subcommand)]
enum CarnotCmd {
    /// Evaluate the criterion on an instance JSON
    Check {
        #[arg(long = "in")]
        input: String,
    },
    /// Solve for the unique admissible last point on one line
    SolveLast {
        #[arg(long = "in")]
        input: String,
        /// Index (0-based) of the line missing one simple point
        #[arg(long)]
        missing: usize,
    },
    /// Construct a curve of matching degree through the prescribed divisors
    Construct {
        #[arg(long = "in")]
        input: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Sample a smooth curve through the prescribed divisors (degree >= 4)
    Smooth {
        #[arg(long = "in")]
        input: String,
        #[arg(long, default_value_t = 32)]
        attempts: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum LinsysCmd {
    /// Analyze {field, curve, m, z} JSON into a full report
    Analyze {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Serialize, Deserialize)]
struct AnalyzeInputDto {
    field: FieldDto,
    curve: TernaryFormDto,
    m: usize,
    z: CurveDivisorDto,
}

#[derive(Serialize, Deserialize)]
struct SolveLastInputDto {
    field: FieldDto,
    lines: [LineDto; 3],
    divisors: [Vec<LinePointDto>; 3],
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn emit(out: &OutArg, json: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(json)?;
    match &out.out {
        Some(p) => std::fs::write(p, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

fn pick_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        use std::time::{SystemTime, UNIX_EPOCH};
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_nanos() as u64)
            .unwrap_or(0)
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Bounds { d, r } => {
            let n = n_lower_bound(d, r)?;
            println!("{}", serde_json::json!({ "n_lower": n }));
        }
        Command::Hartshorne { d, n } => {
            let r = hartshorne_max_dim(d, n);
            println!("{}", serde_json::json!({ "r_max": r }));
        }
        Command::Table { d } => {
            let mut rows = vec![];
            for x in 1..=(d - 3) {
                for beta in (0..=x).rev() {
                    let r = (x + 1) * (x + 2) / 2 - beta;
                    let n = (d - 3) * (x + 3) - beta;
                    let note = if x <= d - 6 {
                        "constructible"
                    } else {
                        "no base-point-free non-trivial systems"
                    };
                    rows.push(serde_json::json!({
                        "r": r, "x": x, "beta": beta, "n_lower": n, "note": note
                    }));
                }
            }
            println!("{}", serde_json::to_string_pretty(&rows)?);
        }
        Command::Decompose { r } => {
            let dec = decompose_r(r)?;
            println!("{}", serde_json::json!({ "r": dec.r, "x": dec.x, "beta": dec.beta }));
        }
        Command::Carnot { cmd } => run_carnot(cmd)?,
        Command::Linsys { cmd } => run_linsys(cmd)?,
        Command::Construct { d, x, beta, p, seed, out } => {
            let seed = pick_seed(seed);
            let field = Field::prime(p)?;
            let req = ConstructionRequest::new(d, x, beta, field, seed)?;
            eprintln!("constructing (d={d}, x={x}, beta={beta}) over F_{p} with seed {seed}");
            let cert = construct(&req)?;
            let dto = CertificateDto::from_certificate(&cert);
            emit(&out, &serde_json::to_value(&dto)?)?;
        }
        Command::Verify { path } => {
            let text = read_input(&path)?;
            let dto: CertificateDto = serde_json::from_str(&text)?;
            let (req, pair, curve, e_points) = dto.to_inputs()?;
            let cert = planecurves::construct::certify(&req, &curve, &pair, &e_points)?;
            eprintln!("certificate verified: r = {}, n = {}", cert.report.r, cert.report.n);
            println!(
                "{}",
                serde_json::json!({ "verified": true, "r": cert.report.r, "n": cert.report.n })
            );
        }
        Command::Selftest => selftest()?,
    }
    Ok(())
}

fn run_carnot(cmd: CarnotCmd) -> Result<()> {
    match cmd {
        CarnotCmd::Check { input } => {
            let dto: CarnotInstanceDto = serde_json::from_str(&read_input(&input)?)?;
            let inst = dto.to_instance()?;
            let holds = check_carnot(&inst)?;
            let value = match carnot_value(&inst)? {
                CarnotValue::Product(v) => serde_json::json!({ "product": v.to_coeff_string() }),
                CarnotValue::Sum(v) => serde_json::json!({ "sum": v.to_coeff_string() }),
            };
            println!("{}", serde_json::json!({ "holds": holds, "value": value }));
        }
        CarnotCmd::SolveLast { input, missing } => {
            let dto: SolveLastInputDto = serde_json::from_str(&read_input(&input)?)?;
            let field = dto.field.to_field()?;
            let lines = [
                dto.lines[0].to_line(&field)?,
                dto.lines[1].to_line(&field)?,
                dto.lines[2].to_line(&field)?,
            ];
            let mut divisors = vec![];
            for (l, pts) in lines.iter().zip(&dto.divisors) {
                divisors.push(DivisorOnLine::new(
                    l.clone(),
                    pts.iter()
                        .map(|e| Ok((e.point.to_point()?, e.mult)))
                        .collect::<Result<Vec<_>>>()?,
                )?);
            }
            let [d1, d2, d3] = <[DivisorOnLine; 3]>::try_from(divisors).unwrap();
            let p = solve_last_coordinate(&lines, &[d1, d2, d3], missing)?;
            println!("{}", serde_json::json!({ "point": PointDto::from_point(&p) }));
        }
        CarnotCmd::Construct { input, out } => {
            let dto: CarnotInstanceDto = serde_json::from_str(&read_input(&input)?)?;
            let inst = dto.to_instance()?;
            let curve = construct_curve(&inst)?;
            emit(&out, &serde_json::json!({ "curve": TernaryFormDto::from_form(&curve) }))?;
        }
        CarnotCmd::Smooth { input, attempts, seed, out } => {
            let seed = pick_seed(seed);
            let dto: CarnotInstanceDto = serde_json::from_str(&read_input(&input)?)?;
            let inst = dto.to_instance()?;
            let curve = smooth_representative(&inst, attempts, seed)?;
            emit(
                &out,
                &serde_json::json!({
                    "curve": TernaryFormDto::from_form(&curve),
                    "seed": seed.to_string()
                }),
            )?;
        }
    }
    Ok(())
}

fn run_linsys(cmd: LinsysCmd) -> Result<()> {
    match cmd {
        LinsysCmd::Analyze { input, seed, out } => {
            let seed = pick_seed(seed);
            let dto: AnalyzeInputDto = serde_json::from_str(&read_input(&input)?)?;
            let field = dto.field.to_field()?;
            let curve = dto.curve.to_form(&field)?;
            let z = dto.z.to_divisor(&curve)?;
            let pres = SystemPresentation::new(curve, dto.m, z)?;
            let report = analyze(&pres, seed)?;
            let mut v = serde_json::to_value(ReportDto::from_report(&report))?;
            v["seed"] = serde_json::Value::String(seed.to_string());
            emit(&out, &v)?;
        }
    }
    Ok(())
}

fn selftest() -> Result<()> {
    use planecurves::carnot::{CarnotCase, CarnotInstance, CarnotValue};
    use planecurves::geometry::{Line, ProjPoint};

    // product criterion on the reference example
    let q = Field::rationals();
    let lines = [
        Line::from_dual_i64(&q, 1, 0, 0)?,
        Line::from_dual_i64(&q, 0, 1, 0)?,
        Line::from_dual_i64(&q, 0, 0, 1)?,
    ];
    let pt = |x, y, z| ProjPoint::from_i64(&q, x, y, z);
    let inst = CarnotInstance::new(
        lines.clone(),
        [
            DivisorOnLine::new(lines[0].clone(), vec![(pt(0, 3, -2)?, 1)])?,
            DivisorOnLine::new(lines[1].clone(), vec![(pt(3, 0, -1)?, 1)])?,
            DivisorOnLine::new(lines[2].clone(), vec![(pt(2, -1, 0)?, 1)])?,
        ],
        CarnotCase::Triangle,
    )?;
    let ok1 = match carnot_value(&inst)? {
        CarnotValue::Product(v) => v == q.from_i64(-1),
        _ => false,
    } && check_carnot(&inst)?;

    // decomposition bijectivity on a prefix
    let mut ok2 = true;
    for r in 2..=1000i64 {
        let dec = decompose_r(r)?;
        ok2 &= (dec.x + 1) * (dec.x + 2) / 2 - dec.beta == r && dec.beta <= dec.x;
    }
    ok2 &= n_lower_bound(10, 3)? == 28 && hartshorne_max_dim(7, 12) == 3;

    println!("{}", serde_json::json!({ "carnot": ok1, "numerics": ok2 }));
    if ok1 && ok2 {
        Ok(())
    } else {
        Err(planecurves::error::Error::InvalidInput("selftest failed".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
