use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dynred::orbital::ModuliBounds;
use dynred::report::{self, PaperExamplesReport, RunReport};
use dynred::{parse_map, Error, Limits, ProjPointQ, RationalMapModel};

/// Good reduction, postcritical sets and preimage towers of rational maps over Q_p.
#[derive(Debug, Parser)]
#[command(name = "dynred", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: Config,
}

#[derive(Debug, Args)]
struct Config {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Seed for the factorization random stream.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Largest admissible iterate degree d^n.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    cap_degree: Option<u64>,
    /// Largest finite field (number of elements) that may be enumerated.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    cap_field: Option<u64>,
    /// Bit-size cap on orbit coordinates.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    cap_height: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct MapArgs {
    /// Prime p; the symbol `p` in the map stands for it.
    #[arg(short = 'p')]
    prime: u64,
    /// Rational function of z, e.g. "z^2+p", or "[a_d,..,a_0]:[b_d,..,b_0]".
    #[arg(allow_hyphen_values = true)]
    map: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Strict good reduction, PC, the residual locus and the fiber criterion.
    Analyze {
        #[command(flatten)]
        map: MapArgs,
    },
    /// Fiber reports and Frobenius cycle types over one basepoint.
    Tower {
        #[command(flatten)]
        map: MapArgs,
        /// Basepoint: a rational number or "inf".
        #[arg(short = 'x', allow_hyphen_values = true)]
        x: String,
        /// Deepest level.
        #[arg(short = 'n', default_value_t = 1)]
        depth: usize,
    },
    /// Forward orbit with tower data at every orbit point.
    Orbit {
        #[command(flatten)]
        map: MapArgs,
        #[arg(short = 'x', allow_hyphen_values = true)]
        x: String,
        /// Orbit length.
        #[arg(short = 'N', default_value_t = 8)]
        steps: usize,
        /// Tower depth at each orbit point.
        #[arg(short = 'n', default_value_t = 1)]
        depth: usize,
    },
    /// Search conjugates z -> p^a z + b (and their compositions with 1/z) for a good model.
    Moduli {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = -3, allow_hyphen_values = true)]
        a_min: i64,
        #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
        a_max: i64,
        /// Skip compositions with the inversion.
        #[arg(long)]
        no_inversion: bool,
    },
    /// Reproduce the worked examples and the degree-one statements.
    PaperExamples {
        #[arg(short = 'p', default_value_t = 5)]
        prime: u64,
    },
}

impl Config {
    fn limits(&self) -> Result<Limits, Error> {
        let mut l = Limits {
            seed: self.seed,
            ..Limits::default()
        };
        if let Some(d) = self.cap_degree {
            l.max_degree = usize::try_from(d).map_err(|_| Error::input("degree cap too large"))?;
        }
        if let Some(f) = self.cap_field {
            l.max_field_size = f;
        }
        if let Some(h) = self.cap_height {
            l.max_height_bits = h;
        }
        Ok(l)
    }
}

fn load(args: &MapArgs) -> Result<RationalMapModel, Error> {
    dynred::arith::check_prime(args.prime)?;
    parse_map(&args.map, Some(args.prime))
}

enum Output {
    Run(Box<RunReport>),
    Examples(PaperExamplesReport),
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let limits = cli.config.limits()?;
    Ok(match &cli.command {
        Command::Analyze { map } => {
            Output::Run(Box::new(report::analyze(&load(map)?, map.prime, &limits)?))
        }
        Command::Tower { map, x, depth } => {
            let x = ProjPointQ::parse(x)?;
            Output::Run(Box::new(report::tower(
                &load(map)?,
                map.prime,
                &x,
                *depth,
                &limits,
            )?))
        }
        Command::Orbit {
            map,
            x,
            steps,
            depth,
        } => {
            let x = ProjPointQ::parse(x)?;
            Output::Run(Box::new(report::orbit(
                &load(map)?,
                map.prime,
                &x,
                *steps,
                *depth,
                &limits,
            )?))
        }
        Command::Moduli {
            map,
            a_min,
            a_max,
            no_inversion,
        } => {
            let bounds = ModuliBounds {
                a_min: *a_min,
                a_max: *a_max,
                include_inversion: !no_inversion,
                ..ModuliBounds::default_for(map.prime)
            };
            Output::Run(Box::new(report::moduli(&load(map)?, map.prime, &bounds)?))
        }
        Command::PaperExamples { prime } => {
            Output::Examples(report::paper_examples(*prime, &limits)?)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("dynred: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let json = cli.config.format == Format::Json;
    let (text, failures) = match &output {
        Output::Run(r) if json => (to_json(r), Vec::new()),
        Output::Run(r) => (report::render_text(r), Vec::new()),
        Output::Examples(r) => {
            let text = if json {
                to_json(r)
            } else {
                report::render_examples_text(r)
            };
            (text, r.checks.iter().filter(|c| !c.pass).collect())
        }
    };
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    if failures.is_empty() {
        return ExitCode::SUCCESS;
    }
    for c in failures {
        eprintln!("- {} / {}: expected {}", c.example, c.property, c.expected);
        eprintln!("+ {} / {}: got      {}", c.example, c.property, c.actual);
    }
    ExitCode::from(1)
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize to JSON");
    s.push('\n');
    s
}
