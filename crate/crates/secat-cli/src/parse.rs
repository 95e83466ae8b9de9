//! The model file format.
//!
//! ```text
//! # 2-sphere
//! generator x 2
//! generator y 3
//! d y = x^2
//! ```
//!
//! Lines are `generator <name> <degree>` declarations and `d <name> = <poly>`
//! assignments; a polynomial is a sum of terms `coef * mon` or `mon`, where
//! `coef` is an integer or `p/q` and `mon` is `g1^e1 g2^e2 ...` (`^1`
//! optional). `#` starts a comment; omitted `d` lines mean zero.

use secat_core::model::SullivanModel;
use secat_core::poly::{Generator, Monomial, PolyElement};
use secat_core::rational::Scalar;
use secat_core::Error as CoreError;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

type SpannedTokens = Vec<(Token, usize)>;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Number(i64, i64), // numerator, denominator
    Star,
    Plus,
    Minus,
    Equals,
    Caret,
}

struct Lexer<'a> {
    line: &'a str,
    line_no: usize,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line_no,
            col: self.pos + 1,
            msg: msg.into(),
        }
    }

    fn tokens(mut self) -> Result<SpannedTokens, ParseError> {
        let bytes = self.line.as_bytes();
        let mut out = Vec::new();
        while self.pos < bytes.len() {
            let c = bytes[self.pos] as char;
            let start = self.pos;
            match c {
                '#' => break,
                c if c.is_whitespace() => {
                    self.pos += 1;
                }
                '*' => {
                    out.push((Token::Star, start));
                    self.pos += 1;
                }
                '+' => {
                    out.push((Token::Plus, start));
                    self.pos += 1;
                }
                '-' => {
                    out.push((Token::Minus, start));
                    self.pos += 1;
                }
                '=' => {
                    out.push((Token::Equals, start));
                    self.pos += 1;
                }
                '^' => {
                    out.push((Token::Caret, start));
                    self.pos += 1;
                }
                c if c.is_ascii_digit() => {
                    let mut end = self.pos;
                    while end < bytes.len() && (bytes[end] as char).is_ascii_digit() {
                        end += 1;
                    }
                    let numer: i64 = self.line[self.pos..end]
                        .parse()
                        .map_err(|_| self.err("integer out of range"))?;
                    let mut denom = 1i64;
                    if end < bytes.len() && bytes[end] as char == '/' {
                        let den_start = end + 1;
                        let mut den_end = den_start;
                        while den_end < bytes.len() && (bytes[den_end] as char).is_ascii_digit() {
                            den_end += 1;
                        }
                        if den_end == den_start {
                            self.pos = end;
                            return Err(self.err("expected denominator after '/'"));
                        }
                        denom = self.line[den_start..den_end]
                            .parse()
                            .map_err(|_| self.err("denominator out of range"))?;
                        if denom == 0 {
                            self.pos = den_start;
                            return Err(self.err("zero denominator"));
                        }
                        end = den_end;
                    }
                    out.push((Token::Number(numer, denom), start));
                    self.pos = end;
                }
                c if c.is_alphabetic() || c == '_' => {
                    let mut end = self.pos;
                    while end < bytes.len() {
                        let c = bytes[end] as char;
                        if c.is_alphanumeric() || c == '_' || c == '\'' {
                            end += 1;
                        } else {
                            break;
                        }
                    }
                    out.push((Token::Ident(self.line[self.pos..end].to_string()), start));
                    self.pos = end;
                }
                other => return Err(self.err(format!("unexpected character '{other}'"))),
            }
        }
        Ok(out)
    }
}

struct PendingModel {
    generators: Vec<Generator>,
    index: HashMap<String, usize>,
    gen_lines: Vec<usize>,
    diff_texts: Vec<Option<(usize, SpannedTokens)>>,
}

/// Parse a model file. Degree-1 generators are rejected unless
/// `allow_degree_one` is set.
pub fn parse_model(text: &str, allow_degree_one: bool) -> Result<Arc<SullivanModel>, ParseError> {
    let mut pending = PendingModel {
        generators: Vec::new(),
        index: HashMap::new(),
        gen_lines: Vec::new(),
        diff_texts: Vec::new(),
    };
    let mut diff_lines: Vec<(usize, String, SpannedTokens)> = Vec::new();

    for (line_idx, line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let tokens = Lexer {
            line,
            line_no,
            pos: 0,
        }
        .tokens()?;
        if tokens.is_empty() {
            continue;
        }
        let err_at = |col: usize, msg: String| ParseError {
            line: line_no,
            col: col + 1,
            msg,
        };
        match &tokens[0].0 {
            Token::Ident(kw) if kw == "generator" => {
                let Some((Token::Ident(name), _)) = tokens.get(1) else {
                    return Err(err_at(tokens[0].1, "expected generator name".into()));
                };
                let Some((Token::Number(deg, 1), col)) = tokens.get(2) else {
                    return Err(err_at(tokens[0].1, "expected integer degree".into()));
                };
                if tokens.len() > 3 {
                    return Err(err_at(tokens[3].1, "trailing tokens after declaration".into()));
                }
                if *deg <= 0 {
                    return Err(err_at(*col, format!("generator degree must be positive, got {deg}")));
                }
                if *deg == 1 && !allow_degree_one {
                    return Err(err_at(
                        *col,
                        "degree-1 generators require --flag-degree-one".into(),
                    ));
                }
                if pending.index.contains_key(name) {
                    return Err(err_at(tokens[1].1, format!("duplicate generator '{name}'")));
                }
                pending.index.insert(name.clone(), pending.generators.len());
                pending.generators.push(Generator::new(name.clone(), *deg));
                pending.gen_lines.push(line_no);
                pending.diff_texts.push(None);
            }
            Token::Ident(kw) if kw == "d" => {
                let Some((Token::Ident(name), name_col)) = tokens.get(1) else {
                    return Err(err_at(tokens[0].1, "expected generator name after 'd'".into()));
                };
                if !matches!(tokens.get(2), Some((Token::Equals, _))) {
                    return Err(err_at(tokens[0].1, "expected '=' in differential assignment".into()));
                }
                diff_lines.push((line_no, name.clone(), tokens[3..].to_vec()));
                let _ = name_col;
            }
            _ => {
                return Err(err_at(
                    tokens[0].1,
                    "expected 'generator' or 'd' at start of line".into(),
                ));
            }
        }
    }

    for (line_no, name, tokens) in diff_lines {
        let Some(&gi) = pending.index.get(&name) else {
            return Err(ParseError {
                line: line_no,
                col: 3,
                msg: format!("unknown generator '{name}' in differential"),
            });
        };
        if pending.diff_texts[gi].is_some() {
            return Err(ParseError {
                line: line_no,
                col: 1,
                msg: format!("duplicate differential for '{name}'"),
            });
        }
        pending.diff_texts[gi] = Some((line_no, tokens));
    }

    let n = pending.generators.len();
    let mut diffs = Vec::with_capacity(n);
    for gi in 0..n {
        match &pending.diff_texts[gi] {
            None => diffs.push(PolyElement::zero()),
            Some((line_no, tokens)) => {
                diffs.push(parse_poly(tokens, &pending, *line_no)?);
            }
        }
    }

    SullivanModel::new(pending.generators.clone(), diffs).map_err(|e| match e {
        CoreError::DifferentialNotSquareZero { name, witness } => ParseError {
            line: pending
                .index
                .get(&name)
                .map(|&gi| pending.gen_lines[gi])
                .unwrap_or(0),
            col: 1,
            msg: format!("d² ≠ 0: d(d {name}) contains the monomial {witness}"),
        },
        other => ParseError {
            line: 0,
            col: 0,
            msg: other.to_string(),
        },
    })
}

fn parse_poly(
    tokens: &[(Token, usize)],
    pending: &PendingModel,
    line_no: usize,
) -> Result<PolyElement, ParseError> {
    let err_at = |col: usize, msg: String| ParseError {
        line: line_no,
        col: col + 1,
        msg,
    };
    let n = pending.generators.len();
    if tokens.is_empty() {
        return Err(err_at(0, "expected a polynomial after '='".into()));
    }
    let mut poly = PolyElement::zero();
    let mut pos = 0usize;
    while pos < tokens.len() {
        // Separator / sign.
        let mut negative = false;
        loop {
            match tokens.get(pos) {
                Some((Token::Plus, _)) => {
                    pos += 1;
                }
                Some((Token::Minus, _)) => {
                    negative = !negative;
                    pos += 1;
                }
                _ => break,
            }
        }

        // Term: optional coefficient, optional '*', monomial factors.
        let mut coef: Scalar = secat_core::rational::rat(if negative { -1 } else { 1 });
        let mut exps = vec![0u32; n];
        let mut saw_factor = false;
        loop {
            match tokens.get(pos) {
                Some((Token::Number(p, q), _)) => {
                    coef *= secat_core::rational::frac(*p, *q);
                    saw_factor = true;
                    pos += 1;
                    if matches!(tokens.get(pos), Some((Token::Star, _))) {
                        pos += 1;
                    }
                }
                Some((Token::Ident(name), col)) => {
                    let Some(&gi) = pending.index.get(name) else {
                        return Err(err_at(*col, format!("unknown generator '{name}'")));
                    };
                    let mut exp = 1u32;
                    if matches!(tokens.get(pos + 1), Some((Token::Caret, _))) {
                        let Some((Token::Number(e, 1), ecol)) = tokens.get(pos + 2) else {
                            return Err(err_at(*col, "expected integer exponent after '^'".into()));
                        };
                        if *e < 0 {
                            return Err(err_at(*ecol, "negative exponent".into()));
                        }
                        exp = *e as u32;
                        pos += 2;
                    }
                    exps[gi] += exp;
                    saw_factor = true;
                    pos += 1;
                }
                Some((Token::Plus, _)) | Some((Token::Minus, _)) | None => break,
                Some((tok, col)) => {
                    return Err(err_at(*col, format!("unexpected token {tok:?} in term")));
                }
            }
        }
        if !saw_factor {
            let col = tokens.get(pos).map(|t| t.1).unwrap_or(0);
            return Err(err_at(col, "empty term".into()));
        }
        // A bare nonzero constant is kept (and rejected later as an
        // inhomogeneous differential); squares of odd generators vanish.
        let odd_square = exps
            .iter()
            .zip(&pending.generators)
            .any(|(&e, g)| g.is_odd() && e > 1);
        if odd_square || secat_core::rational::is_zero(&coef) {
            continue;
        }
        poly.add_term(Monomial::from_exps(exps), coef);
    }
    Ok(poly)
}

/// Render a model in the file grammar; `parse_model(emit_model(m))` is
/// semantically identical to `m`.
#[cfg_attr(not(test), allow(dead_code))]
pub fn emit_model(model: &SullivanModel) -> String {
    let mut out = String::new();
    for g in model.generators() {
        out.push_str(&format!("generator {} {}\n", g.name, g.degree));
    }
    for (i, g) in model.generators().iter().enumerate() {
        let d = model.differential_of(i);
        if d.is_zero() {
            continue;
        }
        let terms: Vec<String> = d
            .terms()
            .map(|(m, c)| {
                let mono = m.label(model.generators());
                if c == &secat_core::rational::rat(1) {
                    mono
                } else {
                    format!("{c} * {mono}")
                }
            })
            .collect();
        out.push_str(&format!("d {} = {}\n", g.name, terms.join(" + ")));
    }
    out
}
