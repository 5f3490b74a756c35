//! `query` and `shell`.

use std::io::{BufRead, IsTerminal, Read, Write};
use std::path::PathBuf;

use serde_json::json;
use strata::query::{Engine, Materialization, Params, PlannerOptions};

use crate::config::{CliConfig, Format};
use crate::data::{open_store, parse_params, save_store};
use crate::output::render_rows;
use crate::{CliError, CliResult};

#[derive(Debug, clap::Args)]
pub struct QueryArgs {
    /// Statement text; read from stdin when absent.
    pub text: Option<String>,
    /// Read the statement from a file.
    #[arg(long, conflicts_with = "text")]
    pub file: Option<PathBuf>,
    /// Parameters as a JSON object.
    #[arg(long)]
    pub params: Option<String>,
    /// Print the operator profile after the rows.
    #[arg(long)]
    pub profile: bool,
    /// full-clone, node-ref-only or columnar.
    #[arg(long)]
    pub materialization: Option<String>,
}

#[derive(Debug, clap::Args)]
pub struct ShellArgs {
    #[arg(long)]
    pub materialization: Option<String>,
}

fn engine(cfg: &CliConfig, materialization: Option<&str>) -> CliResult<Engine> {
    let store = open_store(cfg)?.into_shared();
    let engine = Engine::with_options(
        store,
        PlannerOptions {
            cost: cfg.cost,
            ..PlannerOptions::default()
        },
    );
    if let Some(m) = materialization {
        engine.set_materialization(m.parse::<Materialization>()?);
    }
    Ok(engine)
}

/// Whether the statement can change the store or its indexes.
fn mutates(text: &str) -> bool {
    let first = text.split_whitespace().next().unwrap_or("");
    first.eq_ignore_ascii_case("create") || first.eq_ignore_ascii_case("drop")
}

fn persist(cfg: &CliConfig, engine: &Engine) -> CliResult<()> {
    save_store(cfg, &engine.store().read())
}

fn execute(
    cfg: &CliConfig,
    engine: &Engine,
    text: &str,
    params: &Params,
    profile: bool,
) -> CliResult<String> {
    let text = if profile
        && !text
            .trim_start()
            .to_ascii_uppercase()
            .starts_with("PROFILE")
    {
        format!("PROFILE {text}")
    } else {
        text.to_owned()
    };
    let result = engine.run(&text, params)?;
    if mutates(&text) {
        persist(cfg, engine)?;
    }
    let mut out = render_rows(cfg.format, &result);
    if let Some(p) = &result.profile {
        match cfg.format {
            Format::Json => {
                out.push_str(&json!({ "profile": p }).to_string());
                out.push('\n');
            }
            Format::Table => {
                out.push('\n');
                out.push_str(&p.render());
            }
        }
    }
    Ok(out)
}

pub fn query(cfg: &CliConfig, args: &QueryArgs) -> CliResult<()> {
    let text = match (&args.text, &args.file) {
        (Some(t), _) => t.clone(),
        (None, Some(f)) => std::fs::read_to_string(f).map_err(|e| CliError::io(f, e))?,
        (None, None) => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::io("<stdin>", e))?;
            s
        }
    };
    if text.trim().is_empty() {
        return Err(CliError::Input("empty statement".into()));
    }
    let params = match &args.params {
        Some(p) => parse_params(p)?,
        None => Params::new(),
    };
    let engine = engine(cfg, args.materialization.as_deref())?;
    let out = execute(cfg, &engine, text.trim(), &params, args.profile)?;
    print_block(&out);
    Ok(())
}

fn print_block(out: &str) {
    if out.is_empty() {
        return;
    }
    if out.ends_with('\n') {
        print!("{out}");
    } else {
        println!("{out}");
    }
}

const SHELL_HELP: &str = "statements run one per line; end a line with \\ to continue it\n\
:mode <full-clone|node-ref-only|columnar>  switch materialization\n\
:format <json|table>                       switch output format\n\
:quit                                      leave the shell";

pub fn shell(cfg: &CliConfig, args: &ShellArgs) -> CliResult<()> {
    let mut cfg = cfg.clone();
    let engine = engine(&cfg, args.materialization.as_deref())?;
    let stdin = std::io::stdin();
    let interactive = stdin.is_terminal();
    let mut pending = String::new();
    let mut lines = stdin.lock().lines();
    loop {
        if interactive {
            eprint!(
                "{}",
                if pending.is_empty() {
                    "strata> "
                } else {
                    "   ...> "
                }
            );
            let _ = std::io::stderr().flush();
        }
        let Some(line) = lines.next() else { break };
        let line = line.map_err(|e| CliError::io("<stdin>", e))?;
        if let Some(head) = line.strip_suffix('\\') {
            pending.push_str(head);
            pending.push(' ');
            continue;
        }
        pending.push_str(&line);
        let stmt = std::mem::take(&mut pending);
        let stmt = stmt.trim();
        if stmt.is_empty() {
            continue;
        }
        if let Some(cmd) = stmt.strip_prefix(':') {
            let mut parts = cmd.split_whitespace();
            match (parts.next(), parts.next()) {
                (Some("quit" | "exit" | "q"), _) => break,
                (Some("help"), _) => println!("{SHELL_HELP}"),
                (Some("mode"), Some(m)) => match m.parse::<Materialization>() {
                    Ok(mode) => engine.set_materialization(mode),
                    Err(e) => eprintln!("error: {e}"),
                },
                (Some("format"), Some("json")) => cfg.format = Format::Json,
                (Some("format"), Some("table")) => cfg.format = Format::Table,
                _ => eprintln!("error: unknown shell command {stmt:?}; try :help"),
            }
            continue;
        }
        match execute(&cfg, &engine, stmt, &Params::new(), false) {
            Ok(out) => print_block(&out),
            Err(e) => eprintln!("error: {e}"),
        }
    }
    Ok(())
}
