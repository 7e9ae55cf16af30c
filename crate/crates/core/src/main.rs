mod cli;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cli::config::ExperimentConfig;
use cli::output::RunDir;
use cli::{commands, Artifact, CliError, Outcome};

#[derive(Parser)]
#[command(name = "hrwave", version, about = "Wave-packet creation and interpolator accounting for qubit lattice gauge theories")]
struct Args {
    /// TOML experiment file; defaults apply to every missing key.
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,
    /// Overrides HRWAVE_OUTPUT_ROOT.
    #[arg(long, global = true)]
    output_root: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Momentum-resolved spectra and the one-particle branch.
    Spectrum,
    /// One packet: ρ three ways and the one-particle fidelity.
    Wavepacket,
    /// ρ agreement over the sweep and the two-packet product check.
    LcuVerify,
    /// Operator identities of the chosen fermion encoding.
    EncodeCheck,
    /// C values of the one-dimensional interpolators.
    InterpolatorTable,
    /// C values of the QCD pions and nucleons.
    QcdCvalues,
    /// ρ against δ_p and Ē, and a leakage sweep.
    ScalingStudy,
    /// Print the effective configuration and exit.
    ShowConfig,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Wavepacket => "wavepacket",
            Command::LcuVerify => "lcu-verify",
            Command::EncodeCheck => "encode-check",
            Command::InterpolatorTable => "interpolator-table",
            Command::QcdCvalues => "qcd-cvalues",
            Command::ScalingStudy => "scaling-study",
            Command::ShowConfig => "show-config",
        }
    }
}

fn run(args: &Args) -> Result<(), CliError> {
    let cfg = match &args.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    let mut out = Outcome::default();
    match args.command {
        Command::Spectrum => commands::spectrum(&cfg, &mut out)?,
        Command::Wavepacket => commands::wavepacket(&cfg, &mut out)?,
        Command::LcuVerify => commands::lcu_verify(&cfg, &mut out)?,
        Command::EncodeCheck => commands::encode_check(&cfg, &mut out)?,
        Command::InterpolatorTable => commands::interpolator_table(&cfg, &mut out)?,
        Command::QcdCvalues => commands::qcd_cvalues(&cfg, &mut out)?,
        Command::ScalingStudy => commands::scaling(&cfg, &mut out)?,
        Command::ShowConfig => {
            print!("{}", cfg.to_toml());
            return Ok(());
        }
    }
    let mut dir = RunDir::create(&cfg, args.command.name(), args.output_root.clone(), out.tolerances)?;
    for (name, a) in out.artifacts {
        match a {
            Artifact::Json(v) => dir.json(&name, &v)?,
            Artifact::Bytes(b) => dir.raw(&name, b)?,
        }
    }
    let failed = !out.violations.is_empty();
    let path = dir.finish(if failed { "invariant-violated" } else { "ok" })?;
    println!("{}", path.display());
    if failed {
        return Err(CliError::Invariant(out.violations.join("; ")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hrwave {}: {e}", args.command.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
