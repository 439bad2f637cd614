use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Arg, ArgMatches, Command as App};
use hartree_lab::cli::{configure_threads, parse_config, run, CliError, Command, RunConfig, KEYS};

fn app() -> App {
    let mut app = App::new("hartree-lab")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Feasibility gate, Lorentz-space checks and simulations for Hartree equations")
        .subcommand_required(true)
        .after_help("HARTREE_LAB_THREADS caps the worker threads. Exit codes: 0 pass, 1 check failure, 2 usage error.");
    for command in Command::ALL {
        let mut sub = App::new(command.name()).arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .value_parser(clap::value_parser!(PathBuf))
                .help("key = value file; flags override it"),
        );
        for &(key, default, meaning) in KEYS.iter().filter(|(k, _, _)| *k != "command") {
            let help = if default.is_empty() {
                meaning.to_string()
            } else {
                format!("{meaning} [default: {default}]")
            };
            sub = sub.arg(Arg::new(key).long(key).value_name("VALUE").help(help));
        }
        app = app.subcommand(sub);
    }
    app
}

fn load(name: &str, matches: &ArgMatches) -> Result<RunConfig, CliError> {
    let mut config = match matches.get_one::<PathBuf>("config") {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            parse_config(&text)?
        }
        None => RunConfig::default(),
    };
    config.set("command", name, 0)?;
    for &(key, _, _) in KEYS.iter().filter(|(k, _, _)| *k != "command") {
        if let Some(value) = matches.get_one::<String>(key) {
            config
                .set(key, value, 0)
                .map_err(|e| match e {
                    CliError::Config { message, .. } => CliError::Usage(format!("--{key}: {message}")),
                    other => other,
                })?;
        }
    }
    Ok(config)
}

fn execute(name: &str, matches: &ArgMatches) -> Result<bool, CliError> {
    configure_threads()?;
    let config = load(name, matches)?;
    let report = run(&config)?;
    report.write(&config.out)?;
    print!("{}", report.json());
    Ok(report.pass)
}

fn main() -> ExitCode {
    let matches = app().get_matches();
    let (name, sub) = matches.subcommand().expect("subcommand required");
    match execute(name, sub) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("hartree-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
