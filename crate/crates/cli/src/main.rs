use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use matteron_cli::{run, CliError, CliResult, Command, Format, RunConfig};

#[derive(Parser)]
#[command(name = "matteron", version, about = "Transistor-oscillator model runs")]
struct Cli {
    /// TOML configuration; the bundled default is used when omitted
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file; standard output when omitted
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// csv or json
    #[arg(long, global = true)]
    format: Option<String>,

    /// Omit the timestamp so identical configs give identical bytes
    #[arg(long, global = true)]
    reproducible: bool,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Densities of truncated coherent states at turnaround and center
    States,
    /// Coupling factor |α|χ(α) over amplitude
    Coupling,
    /// Closed-loop operating point with the matterwave block
    SteadyState,
    /// Steady state over one swept parameter
    Sweep,
    /// Traveling and standing matterwave fields
    Matterwave,
    /// Absorbed energy of a mass-spring detector over ω_s
    Detector,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::States => Command::States,
            Cmd::Coupling => Command::Coupling,
            Cmd::SteadyState => Command::SteadyState,
            Cmd::Sweep => Command::Sweep,
            Cmd::Matterwave => Command::Matterwave,
            Cmd::Detector => Command::Detector,
        }
    }
}

fn execute(cli: &Cli) -> CliResult<()> {
    let config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default_config()?,
    };
    let format = match &cli.format {
        Some(f) => f.parse()?,
        None => config.format.unwrap_or(Format::Csv),
    };
    let table = run(cli.command.into(), &config, cli.reproducible)?;
    let text = table.render(format);
    match cli.output.as_ref().or(config.output_path.as_ref()) {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("matteron: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
