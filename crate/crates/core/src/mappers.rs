//! Post-processing of [`QueryResult`]s: a small serializable step pipeline
//! plus CSV, JSON and time-series output.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::MapperError;
use crate::miners::{Column, QueryResult, Scalar, ScalarType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SortDir {
    Asc,
    Desc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cmp {
    #[serde(rename = "==")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
}

impl Cmp {
    fn holds(self, ord: Ordering) -> bool {
        match self {
            Cmp::Eq => ord == Ordering::Equal,
            Cmp::Ne => ord != Ordering::Equal,
            Cmp::Lt => ord == Ordering::Less,
            Cmp::Le => ord != Ordering::Greater,
            Cmp::Gt => ord == Ordering::Greater,
            Cmp::Ge => ord != Ordering::Less,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Step {
    /// Stable sort on one column.
    Sort { column: String, dir: SortDir },
    /// Keeps rows where `row[column] <cmp> value`.
    Filter { column: String, cmp: Cmp, value: Scalar },
    /// Projects onto `columns`, in the given order.
    Select { columns: Vec<String> },
    /// Replaces the table by `(column, count)` rows ordered by key.
    GroupCount { column: String },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MapperPipeline {
    pub steps: Vec<Step>,
}

fn numeric(t: ScalarType) -> bool {
    matches!(t, ScalarType::Int | ScalarType::Float)
}

fn find(columns: &[Column], step: usize, name: &str) -> Result<usize, MapperError> {
    columns
        .iter()
        .position(|c| c.name == name)
        .ok_or_else(|| MapperError::UnknownColumn { step, column: name.to_owned() })
}

impl MapperPipeline {
    pub fn new(steps: Vec<Step>) -> Self {
        Self { steps }
    }

    pub fn then(mut self, step: Step) -> Self {
        self.steps.push(step);
        self
    }

    /// Concatenation: `a.compose(b)` applies `a`'s steps then `b`'s.
    pub fn compose(&self, other: &MapperPipeline) -> MapperPipeline {
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().cloned());
        MapperPipeline { steps }
    }

    /// Schema after every step, or the first step that cannot run.
    pub fn validate(&self, input: &[Column]) -> Result<Vec<Column>, MapperError> {
        let mut cols = input.to_vec();
        for (step, s) in self.steps.iter().enumerate() {
            match s {
                Step::Sort { column, .. } => {
                    find(&cols, step, column)?;
                }
                Step::Filter { column, value, .. } => {
                    let ty = cols[find(&cols, step, column)?].ty;
                    let lit = value.scalar_type();
                    if ty != lit && !(numeric(ty) && numeric(lit)) {
                        return Err(MapperError::InvalidStep {
                            step,
                            message: format!("cannot compare {ty:?} column `{column}` with {lit:?} literal"),
                        });
                    }
                }
                Step::Select { columns } => {
                    let mut next = Vec::with_capacity(columns.len());
                    for name in columns {
                        let c = cols[find(&cols, step, name)?].clone();
                        if next.iter().any(|n: &Column| n.name == c.name) {
                            return Err(MapperError::InvalidStep {
                                step,
                                message: format!("column `{name}` selected twice"),
                            });
                        }
                        next.push(c);
                    }
                    cols = next;
                }
                Step::GroupCount { column } => {
                    if column == "count" {
                        return Err(MapperError::InvalidStep {
                            step,
                            message: "cannot group on a column named `count`".into(),
                        });
                    }
                    let key = cols[find(&cols, step, column)?].clone();
                    cols = vec![key, Column::new("count", ScalarType::Int)];
                }
            }
        }
        Ok(cols)
    }

    /// Runs every step in order on a copy of `input`. The whole pipeline is
    /// validated before the first step runs.
    pub fn apply(&self, input: &QueryResult) -> Result<QueryResult, MapperError> {
        self.validate(&input.columns)?;
        let mut cur = input.clone();
        for s in &self.steps {
            cur = apply_step(s, cur);
        }
        Ok(cur)
    }
}

fn index_of(r: &QueryResult, name: &str) -> usize {
    r.column_index(name).expect("validated column")
}

fn apply_step(step: &Step, mut r: QueryResult) -> QueryResult {
    match step {
        Step::Sort { column, dir } => {
            let i = index_of(&r, column);
            r.rows.sort_by(|a, b| {
                let o = a[i].total_cmp(&b[i]);
                if *dir == SortDir::Desc {
                    o.reverse()
                } else {
                    o
                }
            });
            r
        }
        Step::Filter { column, cmp, value } => {
            let i = index_of(&r, column);
            r.rows.retain(|row| cmp.holds(row[i].total_cmp(value)));
            r
        }
        Step::Select { columns } => {
            let idx: Vec<usize> = columns.iter().map(|c| index_of(&r, c)).collect();
            let mut out = QueryResult::new(idx.iter().map(|&i| r.columns[i].clone()).collect());
            for row in r.rows {
                out.push_row(idx.iter().map(|&i| row[i].clone()).collect());
            }
            out
        }
        Step::GroupCount { column } => {
            let i = index_of(&r, column);
            let mut groups: Vec<(Scalar, i64)> = Vec::new();
            for row in &r.rows {
                match groups.iter_mut().find(|(k, _)| k.total_cmp(&row[i]) == Ordering::Equal) {
                    Some((_, n)) => *n += 1,
                    None => groups.push((row[i].clone(), 1)),
                }
            }
            groups.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut out = QueryResult::new(vec![r.columns[i].clone(), Column::new("count", ScalarType::Int)]);
            for (k, n) in groups {
                out.push_row(vec![k, Scalar::Int(n)]);
            }
            out
        }
    }
}

/// Header of column names then one record per row; RFC-4180 quoting, LF
/// line ends. Returns the row count.
pub fn write_csv_to<W: Write>(result: &QueryResult, out: W) -> Result<usize, MapperError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(result.column_names())?;
    for row in &result.rows {
        w.write_record(row.iter().map(|c| c.to_string()))?;
    }
    w.flush()?;
    Ok(result.len())
}

pub fn write_csv(result: &QueryResult, path: &Path) -> Result<usize, MapperError> {
    write_csv_to(result, BufWriter::new(File::create(path)?))
}

pub fn to_csv_string(result: &QueryResult) -> Result<String, MapperError> {
    let mut buf = Vec::new();
    write_csv_to(result, &mut buf)?;
    String::from_utf8(buf).map_err(|e| MapperError::Malformed(e.to_string()))
}

fn to_json_value(s: &Scalar) -> serde_json::Value {
    serde_json::to_value(s).expect("scalar serializes")
}

/// A JSON array of objects keyed by column name, keys sorted, followed by
/// a newline.
pub fn to_json_string(result: &QueryResult) -> String {
    let objs: Vec<BTreeMap<&str, serde_json::Value>> = result
        .rows
        .iter()
        .map(|row| {
            result
                .columns
                .iter()
                .zip(row)
                .map(|(c, v)| (c.name.as_str(), to_json_value(v)))
                .collect()
        })
        .collect();
    let mut s = serde_json::to_string(&objs).expect("rows serialize");
    s.push('\n');
    s
}

pub fn write_json_to<W: Write>(result: &QueryResult, mut out: W) -> Result<usize, MapperError> {
    out.write_all(to_json_string(result).as_bytes())?;
    out.flush()?;
    Ok(result.len())
}

pub fn write_json(result: &QueryResult, path: &Path) -> Result<usize, MapperError> {
    write_json_to(result, BufWriter::new(File::create(path)?))
}

fn scalar_from_json(v: &serde_json::Value, ty: ScalarType) -> Option<Scalar> {
    match ty {
        ScalarType::Bool => v.as_bool().map(Scalar::Bool),
        ScalarType::Int => v.as_i64().map(Scalar::Int),
        ScalarType::Float => v.as_f64().map(Scalar::Float),
        ScalarType::Str => v.as_str().map(|s| Scalar::Str(s.to_owned())),
    }
}

/// Reads what [`to_json_string`] wrote. Column order and types come from
/// `columns`, since JSON objects carry neither.
pub fn parse_json(text: &str, columns: &[Column]) -> Result<QueryResult, MapperError> {
    let objs: Vec<serde_json::Map<String, serde_json::Value>> = serde_json::from_str(text)?;
    let mut out = QueryResult::new(columns.to_vec());
    for (n, obj) in objs.iter().enumerate() {
        if obj.len() != columns.len() {
            return Err(MapperError::Malformed(format!("row {n}: expected {} keys", columns.len())));
        }
        let row = columns
            .iter()
            .map(|c| {
                obj.get(&c.name)
                    .and_then(|v| scalar_from_json(v, c.ty))
                    .ok_or_else(|| MapperError::Malformed(format!("row {n}: bad or missing `{}`", c.name)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push_row(row);
    }
    Ok(out)
}

/// `(timestamp, value)` pairs in ascending timestamp order; ties keep their
/// input order.
pub fn timeseries(
    result: &QueryResult,
    timestamp: &str,
    value: &str,
) -> Result<Vec<(i64, Scalar)>, MapperError> {
    let ti = find(&result.columns, 0, timestamp)?;
    let vi = find(&result.columns, 0, value)?;
    if result.columns[ti].ty != ScalarType::Int {
        return Err(MapperError::InvalidStep {
            step: 0,
            message: format!("timestamp column `{timestamp}` is not integral"),
        });
    }
    let mut points: Vec<(i64, Scalar)> = result
        .rows
        .iter()
        .map(|r| (r[ti].as_int().unwrap_or_default(), r[vi].clone()))
        .collect();
    points.sort_by_key(|p| p.0);
    Ok(points)
}
