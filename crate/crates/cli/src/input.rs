use std::io::Read;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use forkred_core::format::{parse_quiver, parse_text, to_json_pretty, to_text};
use forkred_core::generate::named;
use forkred_core::{coframe, frame, ExtendedQuiver};
use serde_json::Value;

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Quiver file in JSON or text layout; `-` reads stdin.
    #[arg(long, short = 'i', conflicts_with_all = ["matrix", "quiver"])]
    pub input: Option<PathBuf>,

    /// Inline `[B | C]` rows separated by `;`, e.g. "0 1 | 1 0; -1 0 | 0 1".
    #[arg(long, conflicts_with = "quiver")]
    pub matrix: Option<String>,

    /// Named quiver: markov, a2 or fork.
    #[arg(long)]
    pub quiver: Option<String>,

    /// Replace the frozen part with a framing (C = I).
    #[arg(long, conflicts_with = "coframe")]
    pub frame: bool,

    /// Replace the frozen part with a coframing (C = -I).
    #[arg(long)]
    pub coframe: bool,
}

impl InputArgs {
    pub fn load(&self) -> anyhow::Result<ExtendedQuiver> {
        let q = if let Some(path) = &self.input {
            let text = if path.as_os_str() == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s)?;
                s
            } else {
                std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?
            };
            parse_quiver(&text)?
        } else if let Some(rows) = &self.matrix {
            parse_inline(rows)?
        } else if let Some(name) = &self.quiver {
            match named(name) {
                Some(q) => ExtendedQuiver::unframed(q),
                None => bail!("unknown quiver {name:?} (expected markov, a2 or fork)"),
            }
        } else {
            bail!("no input: pass --input, --matrix or --quiver");
        };
        Ok(if self.frame {
            frame(q.mutable_part())
        } else if self.coframe {
            coframe(q.mutable_part())
        } else {
            q
        })
    }

    /// Like [`InputArgs::load`], but frames inputs without frozen vertices.
    pub fn load_framed(&self) -> anyhow::Result<ExtendedQuiver> {
        let q = self.load()?;
        if q.m() == 0 {
            log::info!("input has no frozen vertices; framing it");
            return Ok(frame(q.mutable_part()));
        }
        Ok(q)
    }
}

/// Rewrites inline rows into the text layout and parses that.
fn parse_inline(rows: &str) -> anyhow::Result<ExtendedQuiver> {
    let rows: Vec<Vec<&str>> = rows
        .split(';')
        .map(|r| {
            r.split(|c: char| c == ',' || c == '|' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .collect()
        })
        .filter(|r: &Vec<&str>| !r.is_empty())
        .collect();
    let n = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    if width < n {
        bail!("inline matrix has {n} rows but only {width} columns");
    }
    let mut text = format!("{n} {}\n", width - n);
    for r in &rows {
        text.push_str(&r.join(" "));
        text.push('\n');
    }
    Ok(parse_text(&text)?)
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
    Dot,
    Jsonl,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}

pub fn colors_string(q: &ExtendedQuiver) -> String {
    q.colors_lossy()
        .iter()
        .map(|c| c.map_or('?', |c| c.letter()))
        .collect()
}

/// Quiver document with a `colors` field added; still valid input.
pub fn quiver_value(q: &ExtendedQuiver) -> Value {
    let mut v: Value = serde_json::from_str(&to_json_pretty(q)).expect("valid json");
    v["colors"] = Value::String(colors_string(q));
    v
}

pub fn quiver_text(q: &ExtendedQuiver) -> String {
    format!("{}# colors: {}\n", to_text(q), colors_string(q))
}

pub fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}
