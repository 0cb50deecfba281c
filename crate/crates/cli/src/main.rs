use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::BigRational;

use congestion_core::bounds;
use congestion_core::equilibria::{analyze, EnumerationBudget, RatioValue};
use congestion_core::game::Game;
use congestion_core::generators::{
    default_eps, gen_poa_general, gen_poa_network, gen_pos_general, gen_singleton_pos,
    gen_two_player_tight, ConstructionOutput, SigmaAffine,
};
use congestion_core::jsonio;
use congestion_core::network::{to_congestion_game, DEFAULT_PATH_CAP};
use congestion_core::rational::{format_rational, parse_rational, rational_f64};
use congestion_core::verifier;
use congestion_core::{Error, Result};

#[derive(Parser)]
#[command(
    name = "congestion",
    about = "Exact analysis of congestion games with misperceived congestion",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Brute-force equilibria, optimum, and cost ratios of a game file
    Analyze(AnalyzeArgs),
    /// CSV of brute-force ratios and closed-form bounds over a parameter grid
    Sweep(SweepArgs),
    /// Write a lower-bound construction as game JSON plus profiles JSON
    Generate(GenerateArgs),
    /// CSV of closed-form bound values over a parameter grid
    Bounds(BoundsArgs),
    /// Certify one proof inequality on an integer grid with exact arithmetic
    Verify(VerifyArgs),
    /// Sweep the bound-gap function delta(sigma) and report its minimum
    DeltaSweep(DeltaSweepArgs),
}

fn parse_rat_arg(s: &str) -> std::result::Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Game or network JSON file
    game: PathBuf,
    #[arg(long, value_parser = parse_rat_arg)]
    rho: BigRational,
    #[arg(long, value_parser = parse_rat_arg)]
    sigma: BigRational,
    /// Abort if the profile space exceeds this many profiles
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    /// Path cap when compiling a network file
    #[arg(long, default_value_t = DEFAULT_PATH_CAP)]
    path_cap: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConstructionArgs {
    /// Players (group-1 players for pos_general)
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Group-2 players for pos_general
    #[arg(long, default_value_t = 1)]
    n2: usize,
    /// Even parameter of singleton_pos (fixes rho = i/(n-1))
    #[arg(long, default_value_t = 2)]
    i: usize,
    #[arg(long, value_parser = parse_rat_arg)]
    eps: Option<BigRational>,
}

fn build_construction(
    name: &str,
    params: &ConstructionArgs,
    rho: &BigRational,
) -> Result<ConstructionOutput> {
    let eps = params.eps.clone().unwrap_or_else(default_eps);
    match name {
        "poa_general" => gen_poa_general(params.n, rho),
        "two_player_tight" => gen_two_player_tight(rho),
        "pos_general" => gen_pos_general(params.n, params.n2, rho, &eps),
        "singleton_pos" => gen_singleton_pos(params.n, params.i, &eps),
        "poa_network" => gen_poa_network(params.n, rho),
        other => Err(Error::UnknownConstruction(other.to_string())),
    }
}

#[derive(Args)]
struct SweepArgs {
    /// Fixed game or network JSON file to analyze at every grid point
    #[arg(long, conflicts_with = "construction")]
    game: Option<PathBuf>,
    /// Construction rebuilt at each grid rho: poa_general, two_player_tight,
    /// pos_general, singleton_pos, poa_network
    #[arg(long)]
    construction: Option<String>,
    #[command(flatten)]
    params: ConstructionArgs,
    #[arg(long, value_parser = parse_rat_arg, default_value = "1")]
    rho_lo: BigRational,
    #[arg(long, value_parser = parse_rat_arg, default_value = "1")]
    rho_hi: BigRational,
    #[arg(long, value_parser = parse_rat_arg, default_value = "1/4")]
    rho_step: BigRational,
    #[arg(long, value_parser = parse_rat_arg, default_value = "1")]
    sigma_lo: BigRational,
    #[arg(long, value_parser = parse_rat_arg, default_value = "1")]
    sigma_hi: BigRational,
    #[arg(long, value_parser = parse_rat_arg, default_value = "1/4")]
    sigma_step: BigRational,
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    #[arg(long, default_value_t = DEFAULT_PATH_CAP)]
    path_cap: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    /// poa_general, two_player_tight, pos_general, singleton_pos, poa_network
    name: String,
    #[command(flatten)]
    params: ConstructionArgs,
    #[arg(long, value_parser = parse_rat_arg, default_value = "1")]
    rho: BigRational,
    /// Output file prefix (defaults to the construction name)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, value_parser = parse_rat_arg, default_value = "0")]
    rho_lo: BigRational,
    #[arg(long, value_parser = parse_rat_arg, default_value = "2")]
    rho_hi: BigRational,
    #[arg(long, value_parser = parse_rat_arg, default_value = "1/4")]
    rho_step: BigRational,
    #[arg(long, value_parser = parse_rat_arg, default_value = "1")]
    sigma_lo: BigRational,
    #[arg(long, value_parser = parse_rat_arg, default_value = "1")]
    sigma_hi: BigRational,
    #[arg(long, value_parser = parse_rat_arg, default_value = "1/4")]
    sigma_step: BigRational,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// smoothness, f1_nonneg, pos_core, two_sigma, pos_proof,
    /// network_pos_a, network_pos_b
    name: String,
    #[arg(long, value_parser = parse_rat_arg)]
    rho: Option<BigRational>,
    #[arg(long, value_parser = parse_rat_arg)]
    sigma: Option<BigRational>,
    /// Check all integer pairs 0 <= x,y <= grid
    #[arg(long, default_value_t = verifier::DEFAULT_GRID)]
    grid: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DeltaSweepArgs {
    #[arg(long, default_value_t = 0.5)]
    sigma_lo: f64,
    #[arg(long, default_value_t = 2.0)]
    sigma_hi: f64,
    #[arg(long, default_value_t = 1e-4)]
    step: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::BudgetExceeded { .. }
                | Error::PathCapExceeded(_)
                | Error::MaxStepsExceeded(_) => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Generate(args) => cmd_generate(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Verify(args) => cmd_verify(args),
        Command::DeltaSweep(args) => cmd_delta_sweep(args),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn load_game(path: &Path, path_cap: u64) -> Result<Game> {
    let text = fs::read_to_string(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Json(e.to_string()))?;
    if jsonio::is_network_value(&value) {
        let net = jsonio::network_from_json(&value)?;
        to_congestion_game(&net, path_cap)
    } else {
        jsonio::game_from_json(&value)
    }
}

fn ratio_text(ratio: &RatioValue) -> String {
    match ratio {
        RatioValue::Finite(r) => format!("{} ({})", format_rational(r), rational_f64(r)),
        RatioValue::Infinite => "inf".to_string(),
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<()> {
    let game = load_game(&args.game, args.path_cap)?;
    let budget = EnumerationBudget::new(args.budget);
    let analysis = analyze(&game, &args.rho, &args.sigma, &budget)?;
    let rho_f = rational_f64(&args.rho);
    let sigma_f = rational_f64(&args.sigma);
    let poa_bound = bounds::poa_upper_bound(rho_f, sigma_f)?;
    let pos_bound = if sigma_f > 0.0 {
        Some(bounds::pos_upper_bound(rho_f, sigma_f)?)
    } else {
        None
    };

    let text = match args.format {
        Format::Json => {
            let mut value = jsonio::analysis_to_json(&analysis);
            let obj = value.as_object_mut().unwrap();
            obj.insert("players".into(), serde_json::json!(game.n()));
            obj.insert("resources".into(), serde_json::json!(game.num_resources()));
            obj.insert("rho".into(), serde_json::json!(format_rational(&args.rho)));
            obj.insert("sigma".into(), serde_json::json!(format_rational(&args.sigma)));
            obj.insert(
                "poa_bound".into(),
                serde_json::json!({
                    "value": poa_bound.value,
                    "region_ok": poa_bound.region_ok,
                    "region_label": poa_bound.region_label,
                }),
            );
            obj.insert(
                "pos_bound".into(),
                match &pos_bound {
                    Some(b) => serde_json::json!({
                        "value": b.value,
                        "region_ok": b.region_ok,
                        "region_label": b.region_label,
                    }),
                    None => serde_json::Value::Null,
                },
            );
            jsonio::to_pretty_string(&value)
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "players: {}", game.n());
            let _ = writeln!(s, "resources: {}", game.num_resources());
            let _ = writeln!(s, "rho: {}", format_rational(&args.rho));
            let _ = writeln!(s, "sigma: {}", format_rational(&args.sigma));
            let _ = writeln!(s, "ne_count: {}", analysis.ne_count);
            let _ = writeln!(s, "worst_ne: {:?}", analysis.worst_ne);
            let _ = writeln!(
                s,
                "worst_ne_cost: {} ({})",
                format_rational(&analysis.worst_ne_cost),
                rational_f64(&analysis.worst_ne_cost)
            );
            let _ = writeln!(s, "best_ne: {:?}", analysis.best_ne);
            let _ = writeln!(
                s,
                "best_ne_cost: {} ({})",
                format_rational(&analysis.best_ne_cost),
                rational_f64(&analysis.best_ne_cost)
            );
            let _ = writeln!(s, "optimum: {:?}", analysis.optimum);
            let _ = writeln!(
                s,
                "optimum_cost: {} ({})",
                format_rational(&analysis.optimum_cost),
                rational_f64(&analysis.optimum_cost)
            );
            let _ = writeln!(s, "potential_minimizer: {:?}", analysis.potential_min);
            let _ = writeln!(s, "poa: {}", ratio_text(&analysis.poa));
            let _ = writeln!(s, "pos: {}", ratio_text(&analysis.pos));
            let _ = writeln!(
                s,
                "poa_bound: {} (region_ok: {}; {})",
                poa_bound.value, poa_bound.region_ok, poa_bound.region_label
            );
            match &pos_bound {
                Some(b) => {
                    let _ = writeln!(
                        s,
                        "pos_bound: {} (region_ok: {}; {})",
                        b.value, b.region_ok, b.region_label
                    );
                }
                None => {
                    let _ = writeln!(s, "pos_bound: undefined for sigma = 0");
                }
            }
            s
        }
    };
    emit(&args.out, &text)
}

/// Inclusive grid lo, lo+step, ... capped at hi, exact in rationals.
fn rational_grid(
    lo: &BigRational,
    hi: &BigRational,
    step: &BigRational,
) -> Result<Vec<BigRational>> {
    if lo > hi {
        return Err(Error::ParamDomain {
            name: "grid",
            value: format!("[{}, {}]", format_rational(lo), format_rational(hi)),
            domain: "lo <= hi",
        });
    }
    if !num::Signed::is_positive(step) {
        return Err(Error::ParamDomain {
            name: "step",
            value: format_rational(step),
            domain: "> 0",
        });
    }
    let mut grid = Vec::new();
    let mut x = lo.clone();
    while &x <= hi {
        grid.push(x.clone());
        x += step;
    }
    Ok(grid)
}

fn ratio_cells(ratio: &RatioValue) -> (String, String) {
    match ratio {
        RatioValue::Finite(r) => (format_rational(r), rational_f64(r).to_string()),
        RatioValue::Infinite => ("inf".into(), "inf".into()),
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let fixed_game = match (&args.game, &args.construction) {
        (Some(path), None) => Some(load_game(path, args.path_cap)?),
        (None, Some(_)) => None,
        _ => {
            return Err(Error::ParamDomain {
                name: "game",
                value: "missing".into(),
                domain: "exactly one of --game or --construction",
            })
        }
    };
    let budget = EnumerationBudget::new(args.budget);
    let rhos = rational_grid(&args.rho_lo, &args.rho_hi, &args.rho_step)?;
    let sigmas = rational_grid(&args.sigma_lo, &args.sigma_hi, &args.sigma_step)?;

    let mut csv = String::from(
        "rho,sigma,brute_poa,brute_poa_decimal,brute_pos,brute_pos_decimal,\
         poa_bound,poa_region_ok,pos_bound,pos_region_ok,status\n",
    );
    for sigma in &sigmas {
        for rho in &rhos {
            let game = match &fixed_game {
                Some(g) => g.clone(),
                None => {
                    let name = args.construction.as_deref().unwrap();
                    let out = build_construction(name, &args.params, rho)?;
                    match &out.network {
                        Some(net) => to_congestion_game(net, args.path_cap)?,
                        None => out.game,
                    }
                }
            };
            let (poa_exact, poa_dec, pos_exact, pos_dec, status) =
                match analyze(&game, rho, sigma, &budget) {
                    Ok(analysis) => {
                        let (pa, pad) = ratio_cells(&analysis.poa);
                        let (ps, psd) = ratio_cells(&analysis.pos);
                        (pa, pad, ps, psd, "ok")
                    }
                    Err(Error::BudgetExceeded { .. }) => (
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        "budget_exceeded",
                    ),
                    Err(other) => return Err(other),
                };
            let rho_f = rational_f64(rho);
            let sigma_f = rational_f64(sigma);
            let poa_bound = bounds::poa_upper_bound(rho_f, sigma_f)?;
            let (pos_bound, pos_ok) = if sigma_f > 0.0 {
                let b = bounds::pos_upper_bound(rho_f, sigma_f)?;
                (b.value.to_string(), b.region_ok.to_string())
            } else {
                (String::new(), String::new())
            };
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{},{},{},{},{}",
                format_rational(rho),
                format_rational(sigma),
                poa_exact,
                poa_dec,
                pos_exact,
                pos_dec,
                poa_bound.value,
                poa_bound.region_ok,
                pos_bound,
                pos_ok,
                status
            );
        }
    }
    emit(&args.out, &csv)
}

fn affine_text(cost: &SigmaAffine) -> String {
    format!(
        "{} + {}*sigma",
        format_rational(&cost.constant),
        format_rational(&cost.sigma_coeff)
    )
}

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let output = build_construction(&args.name, &args.params, &args.rho)?;
    let prefix = args.out.clone().unwrap_or_else(|| PathBuf::from(&args.name));
    let prefix = prefix.to_string_lossy().into_owned();

    let instance_path = match &output.network {
        Some(net) => {
            let path = format!("{prefix}.network.json");
            fs::write(&path, jsonio::to_pretty_string(&jsonio::network_to_json(net)))?;
            path
        }
        None => {
            let path = format!("{prefix}.game.json");
            fs::write(
                &path,
                jsonio::to_pretty_string(&jsonio::game_to_json(&output.game)),
            )?;
            path
        }
    };
    let profiles_path = format!("{prefix}.profiles.json");
    fs::write(
        &profiles_path,
        jsonio::to_pretty_string(&jsonio::construction_profiles_json(&output)),
    )?;

    println!("wrote {instance_path}");
    println!("wrote {profiles_path}");
    println!("name: {}", output.name);
    println!("rho: {}", format_rational(&output.rho));
    println!("players: {}", output.game.n());
    println!("resources: {}", output.game.num_resources());
    println!("designated_ne: {:?}", output.designated_ne);
    println!("comparison: {:?}", output.comparison);
    println!("predicted_ne_cost: {}", affine_text(&output.predicted_ne_cost));
    println!(
        "predicted_comparison_cost: {}",
        affine_text(&output.predicted_comparison_cost)
    );
    Ok(())
}

fn cmd_bounds(args: BoundsArgs) -> Result<()> {
    let rhos = rational_grid(&args.rho_lo, &args.rho_hi, &args.rho_step)?;
    let sigmas = rational_grid(&args.sigma_lo, &args.sigma_hi, &args.sigma_step)?;
    let mut csv = String::from(
        "rho,sigma,poa_bound,poa_region_ok,pos_bound,pos_region_ok,h_sigma,delta_sigma\n",
    );
    for sigma in &sigmas {
        for rho in &rhos {
            let rho_f = rational_f64(rho);
            let sigma_f = rational_f64(sigma);
            let poa = bounds::poa_upper_bound(rho_f, sigma_f)?;
            let (pos_value, pos_ok) = if sigma_f > 0.0 {
                let b = bounds::pos_upper_bound(rho_f, sigma_f)?;
                (b.value.to_string(), b.region_ok.to_string())
            } else {
                (String::new(), String::new())
            };
            let h = if sigma_f > 0.0 {
                bounds::h_sigma(sigma_f)?.to_string()
            } else {
                String::new()
            };
            let delta = if sigma_f >= 0.5 {
                bounds::delta_sigma(sigma_f)?.to_string()
            } else {
                String::new()
            };
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{},{}",
                format_rational(rho),
                format_rational(sigma),
                poa.value,
                poa.region_ok,
                pos_value,
                pos_ok,
                h,
                delta
            );
        }
    }
    emit(&args.out, &csv)
}

fn cmd_verify(args: VerifyArgs) -> Result<()> {
    let report = verifier::verify(
        &args.name,
        args.rho.as_ref(),
        args.sigma.as_ref(),
        args.grid,
    )?;
    let text = match args.format {
        Format::Json => jsonio::to_pretty_string(&jsonio::verification_report_to_json(&report)),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "name: {}", report.name);
            if let Some(rho) = &report.rho {
                let _ = writeln!(s, "rho: {}", format_rational(rho));
            }
            if let Some(sigma) = &report.sigma {
                let _ = writeln!(s, "sigma: {}", format_rational(sigma));
            }
            let _ = writeln!(s, "grid: {}", report.grid);
            let _ = writeln!(s, "holds: {}", report.holds);
            let _ = writeln!(s, "region_ok: {}", report.region_ok);
            let _ = writeln!(s, "region_label: {}", report.region_label);
            if let Some(w) = &report.witness {
                let _ = writeln!(s, "witness: x={} y={} lhs={} rhs={}", w.x, w.y, w.lhs, w.rhs);
            }
            for note in &report.notes {
                let _ = writeln!(s, "note: {note}");
            }
            s
        }
    };
    emit(&args.out, &text)
}

fn cmd_delta_sweep(args: DeltaSweepArgs) -> Result<()> {
    let report = verifier::delta_sweep(args.sigma_lo, args.sigma_hi, args.step)?;
    let mut csv = String::from("sigma,delta,holds\n");
    for sigma in verifier::sigma_grid(args.sigma_lo, args.sigma_hi, args.step) {
        let delta = bounds::delta_sigma(sigma)?;
        let _ = writeln!(csv, "{},{},{}", sigma, delta, delta >= verifier::SWEEP_TOLERANCE);
    }
    emit(&args.out, &csv)?;
    eprintln!(
        "points: {} min_delta: {} at sigma: {} holds: {}",
        report.points, report.min_delta, report.min_sigma, report.holds
    );
    Ok(())
}
