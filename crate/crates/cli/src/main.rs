use std::collections::HashMap;
use std::io::{IsTerminal, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cnlbi_core::diag::{has_errors, sort_diagnostics, Diagnostic, SourceFiles};
use cnlbi_core::gen::{generate, Artifact};
use cnlbi_core::model::{SourceMap, SpecificationModel};
use cnlbi_core::olap::{load_cube, run_use_case};
use cnlbi_core::sema::check;
use cnlbi_core::syntax::Syntax;

#[derive(Parser)]
#[command(name = "cnlbi", version, about = "Parse, check, convert and generate artifacts from BI requirements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse documents and report syntax diagnostics
    Parse {
        #[command(flatten)]
        input: Inputs,
        /// Print the parsed model
        #[arg(long, value_enum)]
        emit: Option<Emit>,
    },
    /// Parse and semantically check documents
    Check {
        #[command(flatten)]
        input: Inputs,
        /// Diagnostics as JSON lines
        #[arg(long)]
        json: bool,
    },
    /// Re-emit a document in the other linguistic style
    Convert {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        to: Lang,
    },
    /// Write SQL, queries, dashboard manifest and requirements document
    Gen {
        #[command(flatten)]
        input: Inputs,
        #[arg(long)]
        out_dir: PathBuf,
        /// Restrict output to some artifacts (repeatable)
        #[arg(long, value_enum, value_delimiter = ',')]
        only: Vec<Only>,
    },
    /// Run one OLAP operation of a use case over CSV data
    Olap {
        #[command(flatten)]
        input: Inputs,
        /// Directory holding manifest.toml and one CSV file per entity
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        usecase: String,
        #[arg(long)]
        op: String,
        /// Parameter value, `name=value` (repeatable)
        #[arg(long = "bind", value_parser = parse_binding)]
        bindings: Vec<(String, String)>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Re-emit a document canonically in its own style
    Fmt {
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Args)]
struct Inputs {
    /// Input files; `-` reads standard input
    #[arg(required = true)]
    files: Vec<String>,
    #[arg(long, value_enum, default_value_t = SyntaxArg::Auto)]
    syntax: SyntaxArg,
}

#[derive(Args)]
struct Input {
    /// Input file; `-` reads standard input
    file: String,
    #[arg(long, value_enum, default_value_t = SyntaxArg::Auto)]
    syntax: SyntaxArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum SyntaxArg {
    Cnlbi,
    Asl,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum Lang {
    Cnlbi,
    Asl,
}

impl From<Lang> for Syntax {
    fn from(l: Lang) -> Syntax {
        match l {
            Lang::Cnlbi => Syntax::Cnlbi,
            Lang::Asl => Syntax::Asl,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    ModelJson,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Only {
    Sql,
    Queries,
    Dashboard,
    Doc,
}

impl From<Only> for Artifact {
    fn from(o: Only) -> Artifact {
        match o {
            Only::Sql => Artifact::Sql,
            Only::Queries => Artifact::Queries,
            Only::Dashboard => Artifact::Dashboard,
            Only::Doc => Artifact::Doc,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Table,
}

fn parse_binding(s: &str) -> Result<(String, String), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, found `{s}`"))?;
    if k.is_empty() {
        return Err(format!("empty parameter name in `{s}`"));
    }
    Ok((k.to_string(), v.to_string()))
}

/// A usage or I/O failure: exit code 2.
struct Fatal(String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

/// Everything parsed from the command's inputs.
struct Loaded {
    files: SourceFiles,
    model: SpecificationModel,
    spans: SourceMap,
    diagnostics: Vec<Diagnostic>,
    /// Syntax of the first input.
    syntax: Syntax,
}

fn read_input(name: &str) -> Result<String, Fatal> {
    if name == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(name).map_err(|e| Fatal(format!("{name}: {e}")))
    }
}

fn syntax_of(name: &str, arg: SyntaxArg) -> Result<Syntax, Fatal> {
    match arg {
        SyntaxArg::Cnlbi => Ok(Syntax::Cnlbi),
        SyntaxArg::Asl => Ok(Syntax::Asl),
        SyntaxArg::Auto if name == "-" => Err(Fatal("reading standard input needs --syntax cnlbi or --syntax asl".into())),
        SyntaxArg::Auto => Syntax::from_path(Path::new(name))
            .ok_or_else(|| Fatal(format!("{name}: cannot tell the syntax from the extension; use --syntax"))),
    }
}

fn load(names: &[String], arg: SyntaxArg) -> Result<Loaded, Fatal> {
    let mut loaded = Loaded {
        files: SourceFiles::new(),
        model: SpecificationModel::default(),
        spans: SourceMap::new(),
        diagnostics: Vec::new(),
        syntax: Syntax::Cnlbi,
    };
    for (i, name) in names.iter().enumerate() {
        let syntax = syntax_of(name, arg)?;
        if i == 0 {
            loaded.syntax = syntax;
        }
        let text = read_input(name)?;
        let display = if name == "-" { "<stdin>" } else { name.as_str() };
        let file = loaded.files.add(display, text.clone());
        let parsed = syntax.parse(&text, file);
        loaded.model.merge(parsed.model);
        loaded.spans.merge(parsed.spans);
        loaded.diagnostics.extend(parsed.diagnostics);
    }
    Ok(loaded)
}

fn color() -> bool {
    match std::env::var("CNLBI_COLOR").as_deref() {
        Ok("always") => true,
        Ok("never") => false,
        _ => std::io::stderr().is_terminal(),
    }
}

fn report(files: &SourceFiles, diags: &mut [Diagnostic], json: bool) {
    sort_diagnostics(diags);
    let color = color();
    let mut err = std::io::stderr().lock();
    for d in diags.iter() {
        let line = if json {
            format!("{}\n", d.to_json_line(files.name(d.span.map_or(u32::MAX, |s| s.file))))
        } else {
            files.render(d, color)
        };
        let _ = err.write_all(line.as_bytes());
    }
}

/// Parses and checks; `None` (after reporting) when there are errors.
fn checked(input: &Inputs, json: bool) -> Result<Option<Loaded>, Fatal> {
    let mut loaded = load(&input.files, input.syntax)?;
    if !has_errors(&loaded.diagnostics) {
        let report = check(&loaded.model, &loaded.spans);
        loaded.diagnostics.extend(report.diagnostics);
    }
    report(&loaded.files, &mut loaded.diagnostics, json);
    Ok((!has_errors(&loaded.diagnostics)).then_some(loaded))
}

fn out(text: &str) -> Result<(), Fatal> {
    let mut o = std::io::stdout().lock();
    o.write_all(text.as_bytes())?;
    o.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Fatal> {
    match cli.command {
        Command::Parse { input, emit } => {
            let mut loaded = load(&input.files, input.syntax)?;
            report(&loaded.files, &mut loaded.diagnostics, false);
            if let Some(Emit::ModelJson) = emit {
                out(&format!("{}\n", serde_json::to_string_pretty(&loaded.model)?))?;
            }
            Ok(!has_errors(&loaded.diagnostics))
        }
        Command::Check { input, json } => Ok(checked(&input, json)?.is_some()),
        Command::Convert { input, to } => {
            let mut loaded = load(std::slice::from_ref(&input.file), input.syntax)?;
            if has_errors(&loaded.diagnostics) {
                report(&loaded.files, &mut loaded.diagnostics, false);
                return Ok(false);
            }
            let (text, warnings) = Syntax::from(to).emit(&loaded.model);
            loaded.diagnostics.extend(warnings);
            report(&loaded.files, &mut loaded.diagnostics, false);
            out(&text)?;
            Ok(true)
        }
        Command::Fmt { input } => {
            let mut loaded = load(std::slice::from_ref(&input.file), input.syntax)?;
            if has_errors(&loaded.diagnostics) {
                report(&loaded.files, &mut loaded.diagnostics, false);
                return Ok(false);
            }
            let (text, warnings) = loaded.syntax.emit(&loaded.model);
            loaded.diagnostics.extend(warnings);
            report(&loaded.files, &mut loaded.diagnostics, false);
            out(&text)?;
            Ok(true)
        }
        Command::Gen { input, out_dir, only } => {
            let Some(loaded) = checked(&input, false)? else { return Ok(false) };
            let only: Vec<Artifact> = only.into_iter().map(Artifact::from).collect();
            let (files, mut diags) = generate(&loaded.model, &only);
            for (rel, text) in &files {
                let path = out_dir.join(rel);
                if let Some(dir) = path.parent() {
                    std::fs::create_dir_all(dir).map_err(|e| Fatal(format!("{}: {e}", dir.display())))?;
                }
                std::fs::write(&path, text).map_err(|e| Fatal(format!("{}: {e}", path.display())))?;
            }
            report(&loaded.files, &mut diags, false);
            Ok(!has_errors(&diags))
        }
        Command::Olap { input, data, usecase, op, bindings, format } => {
            let Some(loaded) = checked(&input, false)? else { return Ok(false) };
            let cube = match load_cube(&loaded.model, &data) {
                Ok(c) => c,
                Err(mut diags) => {
                    report(&loaded.files, &mut diags, false);
                    return Ok(false);
                }
            };
            let bindings: HashMap<String, String> = bindings.into_iter().collect();
            match run_use_case(&cube, &usecase, &op, &bindings) {
                Ok(table) => {
                    out(&match format {
                        Format::Csv => table.to_csv(),
                        Format::Table => table.to_text_table(),
                    })?;
                    Ok(true)
                }
                Err(e) => {
                    report(&loaded.files, &mut [e.to_diagnostic()], false);
                    Ok(false)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fatal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
