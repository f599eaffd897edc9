use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bundle_labeling::closed_form::{admissible_shifts, certify, label_optimal, labels_from_scheme};
use bundle_labeling::io::{to_csv, to_dot, to_edge_list, to_grid, LabelingFile};
use bundle_labeling::solver::{lambda_exact, SolverOptions, DEFAULT_BUDGET};
use bundle_labeling::{build_bundle, verify_labeling, BundleSpec, LabelScheme, Labeling, ProductKind, SchemeKind};

const EXIT_INVALID: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "bundle-label", version, about = "L(d,1)-labelings of graph bundles of cycles over cycles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a bundle and write it as an edge list or DOT graph.
    Gen {
        #[command(flatten)]
        bundle: BundleArgs,
        #[arg(long, value_enum, default_value_t = Format::Edgelist)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Label an admissible bundle with span 2d+2.
    Label {
        #[command(flatten)]
        bundle: BundleArgs,
        #[arg(short)]
        d: u32,
        #[arg(long, value_enum, default_value_t = Format::Grid)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the certificate JSON here instead of standard error.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Verify a labeling JSON file ("-" reads standard input).
    Verify { file: PathBuf },
    /// List every admissible shift with its certificates.
    Shifts {
        #[arg(long)]
        kind: ProductKind,
        #[arg(short)]
        m: usize,
        #[arg(short)]
        n: usize,
        #[arg(short)]
        d: u32,
        #[arg(long)]
        json: bool,
    },
    /// Compute the exact minimum span by backtracking.
    Lambda {
        #[command(flatten)]
        bundle: BundleArgs,
        #[arg(short)]
        d: u32,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Halve the root branching using label reflection.
        #[arg(long)]
        reflection: bool,
    },
    /// Print the eight L(2,1)-labelings of the bundles over C9 with fibre C7.
    Figure,
}

#[derive(Args)]
struct BundleArgs {
    #[arg(long)]
    kind: ProductKind,
    #[arg(short)]
    m: usize,
    #[arg(short)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    ell: usize,
}

impl BundleArgs {
    fn spec(&self) -> Result<BundleSpec, CliError> {
        BundleSpec::new(self.kind, self.m, self.n, self.ell).map_err(usage)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Grid,
    Csv,
    Json,
    Dot,
    Edgelist,
}

#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

fn usage(e: impl ToString) -> CliError {
    CliError {
        code: EXIT_USAGE,
        message: e.to_string(),
    }
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => match io::stdout().write_all(text.as_bytes()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(usage(e)),
            _ => Ok(()),
        },
    }
}

fn render_labeling(spec: &BundleSpec, labeling: &Labeling, format: Format) -> Result<String, CliError> {
    match format {
        Format::Grid => Ok(to_grid(spec, labeling)),
        Format::Csv => Ok(to_csv(spec, labeling)),
        Format::Json => Ok(LabelingFile::new(spec, labeling).to_json() + "\n"),
        Format::Dot | Format::Edgelist => Err(usage("labelings are written as grid, csv or json")),
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Gen { bundle, format, output } => {
            let spec = bundle.spec()?;
            let graph = build_bundle(&spec).map_err(usage)?;
            let text = match format {
                Format::Edgelist => to_edge_list(&graph),
                Format::Dot => to_dot(&graph, &spec),
                _ => return Err(usage("graphs are written as edgelist or dot")),
            };
            emit(output.as_ref(), &text)?;
        }
        Command::Label {
            bundle,
            d,
            format,
            output,
            certificate,
        } => {
            let spec = bundle.spec()?;
            let result = label_optimal(&spec, d).map_err(usage)?;
            let text = if format == Format::Json {
                let mut file = LabelingFile::new(&spec, &result.labeling);
                file.certificate = Some(result.certificate);
                file.to_json() + "\n"
            } else {
                render_labeling(&spec, &result.labeling, format)?
            };
            emit(output.as_ref(), &text)?;
            let cert = serde_json::to_string(&result.certificate).map_err(usage)?;
            match certificate {
                Some(path) => fs::write(&path, cert + "\n").map_err(usage)?,
                None => eprintln!("certificate: {cert}"),
            }
            eprintln!(
                "{}, span {} ({})",
                result.scheme.formula(spec.kind),
                result.report.span,
                if result.optimal { "optimal" } else { "upper bound only" }
            );
        }
        Command::Verify { file } => {
            let text = if file.as_os_str() == "-" {
                let mut buf = String::new();
                io::stdin().read_to_string(&mut buf).map_err(usage)?;
                buf
            } else {
                fs::read_to_string(&file).map_err(|e| usage(format!("{}: {e}", file.display())))?
            };
            let (spec, labeling) = LabelingFile::from_json(&text)
                .and_then(LabelingFile::into_parts)
                .map_err(usage)?;
            let graph = build_bundle(&spec).map_err(usage)?;
            let report = verify_labeling(&graph, &labeling).map_err(usage)?;
            if report.valid {
                emit(None, &format!("valid, span {}\n", report.span))?;
            } else {
                let mut out = format!(
                    "invalid, span {}, {} violations\n",
                    report.span,
                    report.violations.len()
                );
                for v in &report.violations {
                    let (a, b) = (spec.coord(v.u), spec.coord(v.v));
                    out.push_str(&format!(
                        "  ({},{})-({},{}) distance {} gap {}\n",
                        a.i, a.j, b.i, b.j, v.distance, v.gap
                    ));
                }
                emit(None, &out)?;
                return Ok(ExitCode::from(EXIT_INVALID));
            }
        }
        Command::Shifts { kind, m, n, d, json } => {
            let shifts = admissible_shifts(kind, m, n, d).map_err(usage)?;
            let mut out = String::new();
            for (ell, entries) in &shifts {
                for (scheme, cert) in entries {
                    let cert_json = serde_json::to_string(cert).map_err(usage)?;
                    if json {
                        out.push_str(&format!("{{\"ell\":{ell},\"certificate\":{cert_json}}}\n"));
                    } else {
                        out.push_str(&format!(
                            "ell={ell} {} {}\n",
                            scheme.formula(kind),
                            cert_json
                        ));
                    }
                }
            }
            if !json {
                let list: Vec<String> = shifts.keys().map(usize::to_string).collect();
                out.push_str(&format!("admissible: {{{}}}\n", list.join(", ")));
            }
            emit(None, &out)?;
        }
        Command::Lambda {
            bundle,
            d,
            budget,
            reflection,
        } => {
            let spec = bundle.spec()?;
            let graph = build_bundle(&spec).map_err(usage)?;
            let options = SolverOptions {
                budget,
                reflection_symmetry: reflection,
                ..SolverOptions::default()
            };
            let result = lambda_exact(&graph, d, &options).map_err(usage)?;
            if result.timed_out {
                emit(
                    None,
                    &format!(
                        "budget exhausted: lambda in [{}, {}]\nnodes = {}\n",
                        result.lower_bound, result.upper_bound, result.nodes_explored
                    ),
                )?;
                return Ok(ExitCode::from(EXIT_BUDGET));
            }
            emit(
                None,
                &format!(
                    "lambda = {}\nnodes = {}\n{}",
                    result.lambda,
                    result.nodes_explored,
                    to_grid(&spec, &result.witness)
                ),
            )?;
        }
        Command::Figure => {
            let mut out = String::new();
            for (kind, config) in FIGURE_CONFIGS {
                for (ell, scheme, a) in config {
                    let spec = BundleSpec::new(kind, 9, 7, ell).map_err(usage)?;
                    let scheme = LabelScheme::new(2, scheme, a).map_err(usage)?;
                    let labeling = labels_from_scheme(&spec, &scheme).map_err(usage)?;
                    let graph = build_bundle(&spec).map_err(usage)?;
                    let report = verify_labeling(&graph, &labeling).map_err(usage)?;
                    let certified = certify(&spec, 2)
                        .map_err(usage)?
                        .iter()
                        .any(|(s, _)| *s == scheme);
                    out.push_str(&format!(
                        "{kind} ell={ell} {}: {}, span {}{}\n",
                        scheme.formula(kind),
                        if report.valid { "valid" } else { "INVALID" },
                        report.span,
                        if certified { "" } else { " (uncertified)" }
                    ));
                    out.push_str(&to_grid(&spec, &labeling));
                    out.push('\n');
                }
            }
            emit(None, &out)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

type FigureRow = (usize, SchemeKind, u8);

const FIGURE_CONFIGS: [(ProductKind, [FigureRow; 4]); 2] = [
    (
        ProductKind::Direct,
        [
            (3, SchemeKind::F, 1),
            (4, SchemeKind::F, 2),
            (6, SchemeKind::G, 1),
            (1, SchemeKind::G, 2),
        ],
    ),
    (
        ProductKind::Cartesian,
        [
            (6, SchemeKind::F, 1),
            (1, SchemeKind::F, 2),
            (3, SchemeKind::G, 1),
            (4, SchemeKind::G, 2),
        ],
    ),
];

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
