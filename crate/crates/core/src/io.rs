//! Text formats for point sets, valued sets, graphs, and ordered arrays.
//!
//! All formats are line oriented; `#` starts a comment and blank lines are
//! ignored. Coordinates and values are exact rational literals: integers,
//! finite decimals (converted exactly), or `p/q` fractions.
//!
//! * Point set: `x y` per line.
//! * Valued set: `x y : v` per line.
//! * d-dimensional variants: `x1 … xd` and `x1 … xd : v` (consistent `d`).
//! * Graph: a `vertices N` header, then one `u v` edge per line
//!   (0-based).
//! * Ordered array: `n x y` per line with `n = 1, 2, …` in order.

use thiserror::Error;

use crate::decomp::ValuedSet2;
use crate::game::{PointN, PointSetN, ValuedSetN};
use crate::graphs::FiniteGraph;
use crate::rat::{parse_rat, Rat};
use crate::rook::{Point2, PointSet2};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }
}

/// Content lines with their 1-based numbers, comments stripped.
fn content_lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            None
        } else {
            Some((i + 1, body))
        }
    })
}

/// Whitespace tokens with 1-based starting columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut col = 0;
    for part in line.split_inclusive(char::is_whitespace) {
        let token = part.trim_end_matches(char::is_whitespace);
        if !token.is_empty() {
            out.push((col + 1, token));
        }
        col += part.chars().count();
    }
    out
}

fn parse_literal(line: usize, col: usize, token: &str) -> Result<Rat, ParseError> {
    parse_rat(token)
        .ok_or_else(|| ParseError::new(line, col, format!("bad rational literal {token:?}")))
}

pub fn parse_point_set(src: &str) -> Result<PointSet2, ParseError> {
    let mut points: Vec<Point2> = Vec::new();
    for (line, body) in content_lines(src) {
        let toks = tokens(body);
        if toks.len() != 2 {
            return Err(ParseError::new(
                line,
                toks.first().map_or(1, |t| t.0),
                format!("expected `x y`, found {} tokens", toks.len()),
            ));
        }
        let x = parse_literal(line, toks[0].0, toks[0].1)?;
        let y = parse_literal(line, toks[1].0, toks[1].1)?;
        let p = Point2::new(x, y);
        if points.contains(&p) {
            return Err(ParseError::new(line, toks[0].0, format!("duplicate point {p}")));
        }
        points.push(p);
    }
    Ok(PointSet2::new(points))
}

pub fn parse_valued_set(src: &str) -> Result<ValuedSet2, ParseError> {
    let mut entries: Vec<(Point2, Rat)> = Vec::new();
    for (line, body) in content_lines(src) {
        let Some((coords, value)) = body.split_once(':') else {
            return Err(ParseError::new(line, 1, "expected `x y : v`"));
        };
        let toks = tokens(coords);
        if toks.len() != 2 {
            return Err(ParseError::new(line, 1, "expected two coordinates before `:`"));
        }
        let vtoks = tokens(value);
        if vtoks.len() != 1 {
            return Err(ParseError::new(
                line,
                coords.chars().count() + 2,
                "expected one value after `:`",
            ));
        }
        let x = parse_literal(line, toks[0].0, toks[0].1)?;
        let y = parse_literal(line, toks[1].0, toks[1].1)?;
        let vcol = coords.chars().count() + 1 + vtoks[0].0;
        let v = parse_literal(line, vcol, vtoks[0].1)?;
        let p = Point2::new(x, y);
        if entries.iter().any(|(q, _)| q == &p) {
            return Err(ParseError::new(line, toks[0].0, format!("duplicate point {p}")));
        }
        entries.push((p, v));
    }
    Ok(ValuedSet2::new(entries).expect("duplicates checked above"))
}

fn parse_coords(line: usize, toks: &[(usize, &str)]) -> Result<PointN, ParseError> {
    let coords = toks
        .iter()
        .map(|&(col, tok)| parse_literal(line, col, tok))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PointN::new(coords))
}

pub fn parse_point_set_nd(src: &str) -> Result<PointSetN, ParseError> {
    let mut dim: Option<usize> = None;
    let mut points: Vec<PointN> = Vec::new();
    let mut first_line = 1;
    for (line, body) in content_lines(src) {
        let toks = tokens(body);
        match dim {
            None => {
                if toks.len() < 2 {
                    return Err(ParseError::new(line, 1, "a point needs at least 2 coordinates"));
                }
                dim = Some(toks.len());
                first_line = line;
            }
            Some(d) if toks.len() != d => {
                return Err(ParseError::new(
                    line,
                    1,
                    format!("expected {d} coordinates as on line {first_line}, found {}", toks.len()),
                ));
            }
            _ => {}
        }
        let p = parse_coords(line, &toks)?;
        if points.contains(&p) {
            return Err(ParseError::new(line, toks[0].0, format!("duplicate point {p}")));
        }
        points.push(p);
    }
    let dim = dim.unwrap_or(2);
    PointSetN::new(dim, points).map_err(|e| ParseError::new(first_line, 1, e.to_string()))
}

pub fn parse_valued_set_nd(src: &str) -> Result<ValuedSetN, ParseError> {
    let mut dim: Option<usize> = None;
    let mut entries: Vec<(PointN, Rat)> = Vec::new();
    let mut first_line = 1;
    for (line, body) in content_lines(src) {
        let Some((coords, value)) = body.split_once(':') else {
            return Err(ParseError::new(line, 1, "expected `x1 … xd : v`"));
        };
        let toks = tokens(coords);
        match dim {
            None => {
                if toks.len() < 2 {
                    return Err(ParseError::new(line, 1, "a point needs at least 2 coordinates"));
                }
                dim = Some(toks.len());
                first_line = line;
            }
            Some(d) if toks.len() != d => {
                return Err(ParseError::new(
                    line,
                    1,
                    format!("expected {d} coordinates as on line {first_line}, found {}", toks.len()),
                ));
            }
            _ => {}
        }
        let p = parse_coords(line, &toks)?;
        let vtoks = tokens(value);
        if vtoks.len() != 1 {
            return Err(ParseError::new(line, 1, "expected one value after `:`"));
        }
        let vcol = coords.chars().count() + 1 + vtoks[0].0;
        let v = parse_literal(line, vcol, vtoks[0].1)?;
        if entries.iter().any(|(q, _)| q == &p) {
            return Err(ParseError::new(line, toks[0].0, format!("duplicate point {p}")));
        }
        entries.push((p, v));
    }
    let dim = dim.unwrap_or(2);
    ValuedSetN::new(dim, entries).map_err(|e| ParseError::new(first_line, 1, e.to_string()))
}

pub fn parse_graph(src: &str) -> Result<FiniteGraph, ParseError> {
    let mut lines = content_lines(src);
    let Some((header_line, header)) = lines.next() else {
        return Err(ParseError::new(1, 1, "missing `vertices N` header"));
    };
    let toks = tokens(header);
    if toks.len() != 2 || toks[0].1 != "vertices" {
        return Err(ParseError::new(header_line, 1, "expected `vertices N` header"));
    }
    let n: usize = toks[1]
        .1
        .parse()
        .map_err(|_| ParseError::new(header_line, toks[1].0, "bad vertex count"))?;
    let mut edges = Vec::new();
    for (line, body) in lines {
        let toks = tokens(body);
        if toks.len() != 2 {
            return Err(ParseError::new(line, 1, "expected `u v` edge"));
        }
        let parse_vertex = |&(col, tok): &(usize, &str)| -> Result<usize, ParseError> {
            tok.parse()
                .map_err(|_| ParseError::new(line, col, format!("bad vertex id {tok:?}")))
        };
        let u = parse_vertex(&toks[0])?;
        let v = parse_vertex(&toks[1])?;
        edges.push((u, v));
    }
    FiniteGraph::new(n, edges).map_err(|e| ParseError::new(header_line, 1, e.to_string()))
}

/// Ordered array: `n x y` lines with the index column running 1, 2, …
pub fn parse_ordered_array(src: &str) -> Result<Vec<Point2>, ParseError> {
    let mut points = Vec::new();
    for (line, body) in content_lines(src) {
        let toks = tokens(body);
        if toks.len() != 3 {
            return Err(ParseError::new(line, 1, "expected `n x y`"));
        }
        let n: usize = toks[0]
            .1
            .parse()
            .map_err(|_| ParseError::new(line, toks[0].0, "bad order index"))?;
        if n != points.len() + 1 {
            return Err(ParseError::new(
                line,
                toks[0].0,
                format!("order index {n} out of sequence, expected {}", points.len() + 1),
            ));
        }
        let x = parse_literal(line, toks[1].0, toks[1].1)?;
        let y = parse_literal(line, toks[2].0, toks[2].1)?;
        points.push(Point2::new(x, y));
    }
    Ok(points)
}

pub fn render_point_set(set: &PointSet2) -> String {
    let mut out = String::new();
    for p in set.iter() {
        out.push_str(&format!("{} {}\n", p.x, p.y));
    }
    out
}

pub fn render_valued_set(kf: &ValuedSet2) -> String {
    let mut out = String::new();
    for (p, v) in kf.iter() {
        out.push_str(&format!("{} {} : {}\n", p.x, p.y, v));
    }
    out
}

pub fn render_graph(g: &FiniteGraph) -> String {
    let mut out = format!("vertices {}\n", g.vertex_count());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}
