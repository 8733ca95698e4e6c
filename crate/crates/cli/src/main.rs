use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use preproj_cli::checks::{self, CheckName, Scope};
use preproj_cli::render::{ideal_spec, render_svg, RenderSpec};
use preproj_cli::*;
use preproj_core::permuton::GridPermuton;
use preproj_core::preproj_fin::ideal_of;
use preproj_core::sheets_bricks::ModuleDesc;

/// Ideals of type A preprojective algebras from permutations and permutons.
#[derive(Parser)]
#[command(name = "preproj", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summands of an ideal.
    #[command(subcommand)]
    Ideal(IdealCmd),
    /// Compare two permutations, permutons or permuton ideals.
    #[command(subcommand)]
    Order(OrderCmd),
    /// Run a verification sweep; prints JSON lines and a summary.
    Check {
        name: CheckName,
        /// Sweep over all of S_N.
        #[arg(long)]
        n: Option<usize>,
        /// Check specific permutations (repeatable).
        #[arg(long = "perm")]
        perms: Vec<String>,
        /// Permuton JSON files (twosided and homvanish only).
        #[arg(long, num_args = 1..)]
        files: Vec<PathBuf>,
        /// Make the exhaustive sweep explicit; requires --n.
        #[arg(long)]
        all: bool,
        /// Denominator of the sample grid for the permuton checks.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Brick and deep classification of a module description.
    #[command(subcommand)]
    Brick(BrickCmd),
    /// Supports, generators and morphism combinatorics of sheets.
    #[command(subcommand)]
    Sheet(SheetCmd),
    /// Draw a render spec as SVG.
    Render {
        spec: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Subcommand)]
enum IdealCmd {
    /// The ideal I_w of a permutation.
    Perm {
        w: String,
        /// Also draw the summands.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// The summand of a permuton ideal at height a.
    Permuton {
        file: PathBuf,
        #[arg(long)]
        at: String,
    },
}

#[derive(Subcommand)]
enum OrderCmd {
    Bruhat { u: String, v: String },
    Permuton { a: PathBuf, b: PathBuf },
    Ideal { a: PathBuf, b: PathBuf },
}

#[derive(Subcommand)]
enum BrickCmd {
    Check { file: PathBuf },
}

#[derive(Subcommand)]
enum SheetCmd {
    Analyze {
        file: PathBuf,
        /// y,a for B_a(y) and the elementary morphism; y,a,z,b for cone membership.
        #[arg(long)]
        cone: Option<String>,
        /// y,a: the codependence class of y.
        #[arg(long)]
        codep: Option<String>,
        /// y,a,b: whether b is in the range of codependence.
        #[arg(long)]
        range: Option<String>,
        /// a1,a2,...: count disjoint families of elementary morphisms.
        #[arg(long)]
        multi: Option<String>,
    },
}

fn print(v: &serde_json::Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn write_file(path: &PathBuf, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Ideal(IdealCmd::Perm { w, svg }) => {
            let w = parse_perm(&w)?;
            print(&ideal_perm(&w)?)?;
            if let Some(path) = svg {
                write_file(&path, &render_svg(&ideal_spec(&ideal_of(&w)?, 1000)))?;
            }
        }
        Command::Ideal(IdealCmd::Permuton { file, at }) => {
            let mu: GridPermuton = read_json(&file)?;
            print(&serde_json::to_value(ideal_permuton(&mu, &parse_rat(&at)?)?)?)?;
        }
        Command::Order(OrderCmd::Bruhat { u, v }) => print(&order_bruhat(&parse_perm(&u)?, &parse_perm(&v)?)?)?,
        Command::Order(OrderCmd::Permuton { a, b }) => print(&order_permuton(&read_json(&a)?, &read_json(&b)?))?,
        Command::Order(OrderCmd::Ideal { a, b }) => print(&order_ideal(&read_json(&a)?, &read_json(&b)?))?,
        Command::Check { name, n, perms, files, all, grid } => {
            let scope = match (n, perms.is_empty(), files.is_empty()) {
                (Some(n), true, true) => Scope::All(n),
                (None, false, true) if !all => Scope::Perms(perms.iter().map(|p| parse_perm(p)).collect::<Result<_>>()?),
                (None, true, false) if !all => Scope::Permutons(
                    files
                        .iter()
                        .map(|f| Ok((f.display().to_string(), read_json::<GridPermuton>(f)?)))
                        .collect::<Result<_>>()?,
                ),
                _ => bail!("give exactly one of --n N, --perm w, or --files f ... (--all goes with --n)"),
            };
            let report = checks::run(name, &scope, grid)?;
            print!("{}", report.to_json_lines());
            return Ok(report.summary.pass);
        }
        Command::Brick(BrickCmd::Check { file }) => {
            let desc: ModuleDesc = read_json(&file)?;
            print(&brick_check(&desc)?)?;
        }
        Command::Sheet(SheetCmd::Analyze { file, cone, codep, range, multi }) => {
            let input: SheetInput = read_json(&file)?;
            let queries = SheetQueries::parse(cone.as_deref(), codep.as_deref(), range.as_deref(), multi.as_deref())?;
            print(&sheet_analyze(&input, &queries)?)?;
        }
        Command::Render { spec, output } => {
            let spec: RenderSpec = read_json(&spec)?;
            write_file(&output, &render_svg(&spec))?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
