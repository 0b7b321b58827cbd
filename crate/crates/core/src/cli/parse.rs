//! The line-oriented system file format.
//!
//! ```text
//! # comment
//! variables: x y
//! constants: g
//! constant_values: values.json
//! assert_aspherical = CCH81
//! equation: x y x' y' g'
//! ```
//!
//! `relator:` lines replace `equation:` lines in presentation-only files; the
//! two cannot be mixed and presentation-only files have no constants. A
//! trailing `'` marks an inverse; `1` is the empty word.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;

use crate::system::{is_valid_name, EquationSystem};
use crate::words::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FileMode {
    #[default]
    Equations,
    Presentation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemFile {
    pub system: EquationSystem,
    pub mode: FileMode,
    /// Path of the matrix file, as written.
    pub constant_values: Option<PathBuf>,
    pub asserted_aspherical: Option<String>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Freely reduce each equation after parsing.
    pub reduce: bool,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column, message: message.into() }
}

/// Whitespace-separated tokens with 1-based columns (in characters).
fn tokens(text: &str, offset: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (byte, ch)) in text.char_indices().enumerate() {
        if ch.is_whitespace() {
            if let Some((c, b)) = start.take() {
                out.push((c, &text[b..byte]));
            }
        } else if start.is_none() {
            start = Some((offset + col + 1, byte));
        }
    }
    if let Some((c, b)) = start {
        out.push((c, &text[b..]));
    }
    out
}

struct PendingWord<'a> {
    line: usize,
    tokens: Vec<(usize, &'a str)>,
}

/// Parse a system file. Words are kept as written unless `opts.reduce` is set.
pub fn parse_system(text: &str, opts: ParseOptions) -> Result<SystemFile, ParseError> {
    let mut variables: Vec<(usize, usize, String)> = Vec::new();
    let mut constants: Vec<(usize, usize, String)> = Vec::new();
    let mut pending: Vec<PendingWord> = Vec::new();
    let mut mode: Option<FileMode> = None;
    let mut constant_values = None;
    let mut asserted_aspherical = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let sep = content.find([':', '=']).ok_or_else(|| {
            let col = content.chars().take_while(|c| c.is_whitespace()).count() + 1;
            err(line, col, "expected `key: value`")
        })?;
        let key = content[..sep].trim();
        let key_col = content[..sep].chars().take_while(|c| c.is_whitespace()).count() + 1;
        let value = &content[sep + 1..];
        let value_offset = content[..=sep].chars().count();
        let toks = tokens(value, value_offset);
        match key {
            "variables" | "constants" => {
                let target = if key == "variables" { &mut variables } else { &mut constants };
                for (col, name) in toks {
                    if !is_valid_name(name) {
                        return Err(err(line, col, format!("invalid name `{name}`")));
                    }
                    target.push((line, col, name.to_string()));
                }
            }
            "equation" | "relator" => {
                let this = if key == "equation" { FileMode::Equations } else { FileMode::Presentation };
                if mode.is_some_and(|m| m != this) {
                    return Err(err(line, key_col, "cannot mix `equation:` and `relator:` lines"));
                }
                mode = Some(this);
                if toks.is_empty() {
                    return Err(err(line, value_offset + 1, "empty word; write `1` for the identity"));
                }
                pending.push(PendingWord { line, tokens: toks });
            }
            "constant_values" => {
                let path = value.trim();
                if path.is_empty() {
                    return Err(err(line, value_offset + 1, "missing path"));
                }
                constant_values = Some(PathBuf::from(path));
            }
            "assert_aspherical" => {
                let tag = value.trim();
                if tag.is_empty() {
                    return Err(err(line, value_offset + 1, "missing citation tag"));
                }
                asserted_aspherical = Some(tag.to_string());
            }
            other => return Err(err(line, key_col, format!("unknown key `{other}`"))),
        }
    }

    let mode = mode.unwrap_or_default();
    if mode == FileMode::Presentation {
        if let Some((line, col, _)) = constants.first() {
            return Err(err(*line, *col, "presentation files have no constants"));
        }
        if constant_values.is_some() {
            return Err(err(1, 1, "presentation files have no constant values"));
        }
    }

    let mut symbols: HashMap<&str, Letter> = HashMap::new();
    for (i, (line, col, name)) in variables.iter().enumerate() {
        if symbols.insert(name, Letter::var(i)).is_some() {
            return Err(err(*line, *col, format!("`{name}` declared twice")));
        }
    }
    for (c, (line, col, name)) in constants.iter().enumerate() {
        if symbols.insert(name, Letter::constant(c)).is_some() {
            return Err(err(*line, *col, format!("`{name}` declared twice")));
        }
    }

    let mut equations = Vec::with_capacity(pending.len());
    for p in &pending {
        let mut letters = Vec::with_capacity(p.tokens.len());
        if p.tokens.len() == 1 && p.tokens[0].1 == "1" {
            equations.push(Word::empty());
            continue;
        }
        for &(col, tok) in &p.tokens {
            let (name, inverse) = match tok.strip_suffix('\'') {
                Some(stem) => (stem, true),
                None => (tok, false),
            };
            let letter = symbols
                .get(name)
                .ok_or_else(|| err(p.line, col, format!("undeclared symbol `{name}`")))?;
            letters.push(if inverse { letter.inv() } else { *letter });
        }
        let w = Word::unreduced(letters);
        equations.push(if opts.reduce { w.reduced() } else { w });
    }

    let names = |v: Vec<(usize, usize, String)>| v.into_iter().map(|(_, _, n)| n).collect();
    let system = EquationSystem::new(names(variables), names(constants), equations)
        .map_err(|e| err(1, 1, e.to_string()))?;
    Ok(SystemFile { system, mode, constant_values, asserted_aspherical })
}

/// Parse a `;`-separated list of words over `system`'s variables.
pub fn parse_words(text: &str, system: &EquationSystem) -> Result<Vec<Word>, ParseError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split(';') {
        let toks = tokens(part, offset);
        offset += part.chars().count() + 1;
        if toks.is_empty() {
            continue;
        }
        let mut letters = Vec::with_capacity(toks.len());
        for (col, tok) in toks {
            if tok == "1" {
                continue;
            }
            let (name, inverse) = match tok.strip_suffix('\'') {
                Some(stem) => (stem, true),
                None => (tok, false),
            };
            let i = system
                .variables()
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| err(1, col, format!("undeclared variable `{name}`")))?;
            letters.push(if inverse { Letter::var_inv(i) } else { Letter::var(i) });
        }
        out.push(Word::reduce(letters));
    }
    Ok(out)
}

/// Render a file in the same grammar; reparsing gives an identical system.
pub fn print_system(file: &SystemFile) -> String {
    let s = &file.system;
    let mut out = String::new();
    out.push_str("variables:");
    for v in s.variables() {
        out.push(' ');
        out.push_str(v);
    }
    out.push('\n');
    if !s.constants().is_empty() {
        out.push_str("constants:");
        for c in s.constants() {
            out.push(' ');
            out.push_str(c);
        }
        out.push('\n');
    }
    if let Some(p) = &file.constant_values {
        out.push_str(&format!("constant_values: {}\n", p.display()));
    }
    if let Some(tag) = &file.asserted_aspherical {
        out.push_str(&format!("assert_aspherical = {tag}\n"));
    }
    let key = match file.mode {
        FileMode::Equations => "equation",
        FileMode::Presentation => "relator",
    };
    for w in s.equations() {
        out.push_str(&format!("{key}: {}\n", s.render(w)));
    }
    out
}
