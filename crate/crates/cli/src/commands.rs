use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use grepo_core::mappers::{to_csv_string, to_json_string};
use grepo_core::{
    Column, GraphStore, MapperPipeline, MineManager, NodeId, ProjectId, Q3Mode, QueryResult, Scalar, ScalarType,
    WorstCaseQuery,
};
use grepo_driller::{drill_into_db, open_store, ProjectConfig};

use crate::args::{DbArg, DrillArgs, ExportArgs, Format, MineArgs, Mode, Q1Table, Query, TargetQuery};
use crate::CliError;

/// Loads a config, letting `--db` / `GREPO_DB` replace its db_path.
pub fn load_config(path: &Path, db: &DbArg) -> Result<ProjectConfig, CliError> {
    let loaded = ProjectConfig::load(path, db.db.as_deref())?;
    for w in &loaded.warnings {
        log::warn!("{}: {w}", path.display());
    }
    Ok(loaded.config)
}

pub fn cmd_drill(args: &DrillArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let config = load_config(&args.config, &args.db)?;
    let (report, _) = drill_into_db(&config)?;
    let json = serde_json::to_string_pretty(&report).map_err(anyhow::Error::from)?;
    writeln!(stdout, "{json}")?;
    Ok(())
}

fn required<'a>(value: &'a Option<String>, flag: &str, query: Query) -> Result<&'a str, CliError> {
    value
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("{query:?} requires --{flag}").to_lowercase()))
}

fn db_path(db: &DbArg) -> Result<&Path, CliError> {
    db.db.as_deref().ok_or_else(|| CliError::Usage("no store given: pass --db or set GREPO_DB".into()))
}

fn project(name: &str) -> Result<ProjectId, CliError> {
    ProjectId::new(name).map_err(|e| CliError::Usage(e.to_string()))
}

/// What a query produced: a table, or Q5's single (possibly undefined) mean.
#[derive(Debug)]
pub enum MineOutput {
    Table(QueryResult),
    Value(Option<f64>),
}

fn column(name: &str, values: impl IntoIterator<Item = String>) -> QueryResult {
    let mut t = QueryResult::new(vec![Column::new(name, ScalarType::Str)]);
    for v in values {
        t.push_row(vec![Scalar::Str(v)]);
    }
    t
}

/// Runs one query against an opened store.
pub fn run_query(store: &GraphStore, args: &MineArgs) -> Result<MineOutput, CliError> {
    let mm = MineManager::new(store, project(&args.project)?);
    let q = args.query;
    let table = match q {
        Query::Q1 => {
            let (nodes, edges) = mm.q1_all();
            match args.table {
                Q1Table::Nodes => nodes,
                Q1Table::Edges => edges,
            }
        }
        Query::Q2 => mm.files().file_update_history(required(&args.file, "file", q)?)?,
        Query::Q3 => {
            let mode = match args.mode {
                Mode::Iterative => Q3Mode::Iterative,
                Mode::SinglePass => Q3Mode::SinglePass,
            };
            mm.methods().q3_file_complexity(required(&args.file, "file", q)?, mode)?
        }
        Query::Q4 => mm.developers().developer_files_by_type(required(&args.dev, "dev", q)?)?,
        Query::Q5 => {
            let mean = mm.developers().developer_avg_method_complexity(required(&args.dev, "dev", q)?)?;
            return Ok(MineOutput::Value(mean));
        }
        Query::Commits => mm.commits().commits(args.branch.as_deref())?,
        Query::Branches => column("name", mm.commits().branches()),
        Query::Parents => column("sha", mm.commits().parents(required(&args.sha, "sha", q)?)?),
        Query::Developers => {
            let mut t = QueryResult::new(vec![
                Column::new("id", ScalarType::Str),
                Column::new("name", ScalarType::Str),
                Column::new("email", ScalarType::Str),
            ]);
            for d in mm.developers().developers() {
                t.push_row(vec![Scalar::Str(d.id.as_str().into()), Scalar::Str(d.name), Scalar::Str(d.email)]);
            }
            t
        }
        Query::FileMethods => {
            let mut t = QueryResult::new(vec![
                Column::new("id", ScalarType::Str),
                Column::new("name", ScalarType::Str),
                Column::new("long_name", ScalarType::Str),
            ]);
            for m in mm.files().file_methods(required(&args.file, "file", q)?)? {
                t.push_row(vec![Scalar::Str(m.id.as_str().into()), Scalar::Str(m.name), Scalar::Str(m.long_name)]);
            }
            t
        }
        Query::MethodHistory => {
            let raw = required(&args.method, "method", q)?;
            let id = NodeId::parse(raw).map_err(|_| CliError::UnknownTarget(format!("not found: method `{raw}`")))?;
            mm.methods().method_update_history(&id)?
        }
        Query::WorstCase => {
            let which = args
                .target_query
                .ok_or_else(|| CliError::Usage("worst-case requires --for q2|q3|q4|q5".into()))?;
            let wc = mm.worst_case_target(worst_case_query(which))?;
            let mut t = QueryResult::new(vec![
                Column::new("target", ScalarType::Str),
                Column::new("degree", ScalarType::Int),
                Column::new("workload", ScalarType::Int),
            ]);
            t.push_row(vec![
                Scalar::Str(wc.target.as_str().into()),
                Scalar::Int(wc.degree as i64),
                Scalar::Int(wc.workload as i64),
            ]);
            t
        }
    };
    Ok(MineOutput::Table(table))
}

pub fn worst_case_query(q: TargetQuery) -> WorstCaseQuery {
    match q {
        TargetQuery::Q2 => WorstCaseQuery::Q2,
        TargetQuery::Q3 => WorstCaseQuery::Q3,
        TargetQuery::Q4 => WorstCaseQuery::Q4,
        TargetQuery::Q5 => WorstCaseQuery::Q5,
    }
}

fn load_pipeline(path: &Path) -> Result<MapperPipeline, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read pipeline {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid pipeline {}: {e}", path.display())))
}

/// Renders a query output. Tables follow `format`; a bare value is printed
/// as a JSON number (`null` when undefined) in either format.
pub fn render(output: &MineOutput, format: Format) -> Result<String, CliError> {
    match output {
        MineOutput::Table(t) => match format {
            Format::Csv => to_csv_string(t).map_err(|e| CliError::Failure(e.into())),
            Format::Json => Ok(to_json_string(t)),
        },
        MineOutput::Value(v) => {
            Ok(format!("{}\n", serde_json::to_string(v).map_err(anyhow::Error::from)?))
        }
    }
}

fn write_out(out: Option<&PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn cmd_mine(args: &MineArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let db = db_path(&args.db)?;
    if !db.exists() {
        return Err(CliError::Usage(format!("store {} does not exist; run `grepo drill` first", db.display())));
    }
    let store = open_store(db)?;
    let mut output = run_query(&store, args)?;
    if let Some(path) = &args.pipeline {
        let pipeline = load_pipeline(path)?;
        let table = match output {
            MineOutput::Table(t) => t,
            MineOutput::Value(v) => {
                let mut t = QueryResult::new(vec![Column::new("avg_complexity", ScalarType::Float)]);
                if let Some(x) = v {
                    t.push_row(vec![Scalar::Float(x)]);
                }
                t
            }
        };
        output = MineOutput::Table(pipeline.apply(&table).map_err(|e| CliError::Usage(e.to_string()))?);
    }
    write_out(args.out.as_ref(), &render(&output, args.format)?, stdout)
}

pub fn cmd_export(args: &ExportArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let store = open_store(db_path(&args.db)?)?;
    let project = args.project.as_deref().map(project).transpose()?;
    let lines = store.export_jsonl(&args.out, project.as_ref())?;
    writeln!(stdout, "{lines} records written to {}", args.out.display())?;
    Ok(())
}
