//! Line-oriented text formats for polytopes and triangulations.
//!
//! Both formats are UTF-8 with `#` comments and blank lines ignored.
//! Coordinates are given in the coordinates of the polytope's lattice, so
//! every row is integral; the optional `LATTICE` section carries the basis
//! of the lattice itself as rational ambient rows (absent means the standard
//! lattice). Rationals are written `p/q` with `q > 0`, or as a bare integer
//! when the denominator is one. Writers are canonical, so
//! write -> read -> write reproduces the exact bytes.
//!
//! Polytope:
//! ```text
//! DIM d
//! LATTICE d        # optional, d rows of d rationals
//! ...
//! VERTICES n
//! ...              # n rows of d integers
//! ```
//!
//! Triangulation:
//! ```text
//! DIM d
//! LATTICE d        # optional
//! POINTS n
//! ...              # n rows of d integers
//! CELLS m
//! ...              # m rows of zero-based point indices
//! WEIGHT-LAYERS l  # optional, l rows of n rationals
//! ...
//! ```

use crate::exact::{Int, Rat, RatVector};
use crate::polytope::{Lattice, PointConfiguration, Polytope};
use crate::regular::LayeredWeights;
use crate::subdivision::{Subdivision, Triangulation};
use num_traits::{One, Signed, Zero};
use std::fmt::Write as _;

/// Meaningful lines of a file: content before any `#`, non-blank.
fn lines(text: &str) -> Vec<&str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect()
}

fn parse_rat(tok: &str) -> Result<Rat, String> {
    let mk_err = || format!("bad rational `{tok}`");
    if let Some((p, q)) = tok.split_once('/') {
        let num: Int = p.parse().map_err(|_| mk_err())?;
        let den: Int = q.parse().map_err(|_| mk_err())?;
        if !den.is_positive() {
            return Err(format!("denominator must be positive in `{tok}`"));
        }
        Ok(Rat::new(num, den))
    } else {
        let num: Int = tok.parse().map_err(|_| mk_err())?;
        Ok(Rat::from_integer(num))
    }
}

fn parse_int(tok: &str) -> Result<Int, String> {
    tok.parse().map_err(|_| format!("bad integer `{tok}`"))
}

fn parse_usize(tok: &str) -> Result<usize, String> {
    tok.parse().map_err(|_| format!("bad count `{tok}`"))
}

fn rat_row(line: &str, d: usize) -> Result<Vec<Rat>, String> {
    let row: Result<Vec<Rat>, String> =
        line.split_whitespace().map(parse_rat).collect();
    let row = row?;
    if row.len() != d {
        return Err(format!("expected {d} entries, got {} in `{line}`", row.len()));
    }
    Ok(row)
}

fn int_row(line: &str, d: usize) -> Result<Vec<Int>, String> {
    let row: Result<Vec<Int>, String> =
        line.split_whitespace().map(parse_int).collect();
    let row = row?;
    if row.len() != d {
        return Err(format!("expected {d} entries, got {} in `{line}`", row.len()));
    }
    Ok(row)
}

fn fmt_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn write_row<T, F: Fn(&T) -> String>(out: &mut String, row: &[T], f: F) {
    let mut first = true;
    for x in row {
        if !first {
            out.push(' ');
        }
        out.push_str(&f(x));
        first = false;
    }
    out.push('\n');
}

/// Section header `NAME count`.
fn header(line: &str, name: &str) -> Option<Result<usize, String>> {
    let mut it = line.split_whitespace();
    if it.next() != Some(name) {
        return None;
    }
    let Some(tok) = it.next() else {
        return Some(Err(format!("`{name}` needs a count")));
    };
    if it.next().is_some() {
        return Some(Err(format!("trailing tokens after `{name}`")));
    }
    Some(parse_usize(tok))
}

struct Cursor<'a> {
    lines: Vec<&'a str>,
    at: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { lines: lines(text), at: 0 }
    }

    fn next(&mut self) -> Result<&'a str, String> {
        let l = self.lines.get(self.at).ok_or("unexpected end of file")?;
        self.at += 1;
        Ok(l)
    }

    fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.at).copied()
    }

    fn done(&self) -> bool {
        self.at == self.lines.len()
    }
}

/// `DIM d` followed by the optional `LATTICE` block.
fn read_dim_lattice(c: &mut Cursor) -> Result<(usize, Lattice), String> {
    let d = header(c.next()?, "DIM").ok_or("expected `DIM d`")??;
    if d == 0 {
        return Err("dimension must be positive".into());
    }
    let lattice = if let Some(l) = c.peek() {
        if let Some(k) = header(l, "LATTICE") {
            let k = k?;
            c.next()?;
            if k != d {
                return Err(format!("LATTICE must have {d} rows, got {k}"));
            }
            let mut basis = Vec::with_capacity(k);
            for _ in 0..k {
                basis.push(rat_row(c.next()?, d)?);
            }
            Lattice::new(basis)
        } else {
            Lattice::standard(d)
        }
    } else {
        Lattice::standard(d)
    };
    Ok((d, lattice))
}

fn is_standard(l: &Lattice) -> bool {
    l.basis.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, x)| {
            if i == j {
                x.is_one()
            } else {
                x.is_zero()
            }
        })
    })
}

fn write_dim_lattice(out: &mut String, lattice: &Lattice) {
    writeln!(out, "DIM {}", lattice.dim).unwrap();
    if !is_standard(lattice) {
        writeln!(out, "LATTICE {}", lattice.dim).unwrap();
        for row in &lattice.basis {
            write_row(out, row, fmt_rat);
        }
    }
}

/// Parse a polytope file: vertices in lattice coordinates.
pub fn read_polytope(text: &str) -> Result<Polytope, String> {
    let mut c = Cursor::new(text);
    let (d, lattice) = read_dim_lattice(&mut c)?;
    let n = header(c.next()?, "VERTICES").ok_or("expected `VERTICES n`")??;
    if n == 0 {
        return Err("a polytope needs at least one vertex".into());
    }
    let mut vertices = Vec::with_capacity(n);
    for _ in 0..n {
        vertices.push(int_row(c.next()?, d)?);
    }
    if !c.done() {
        return Err(format!("unexpected trailing line `{}`", c.next()?));
    }
    Ok(Polytope::from_vertices(lattice, vertices))
}

/// Canonical polytope file.
pub fn write_polytope(p: &Polytope) -> String {
    let mut out = String::new();
    write_dim_lattice(&mut out, &p.lattice);
    writeln!(out, "VERTICES {}", p.vertices.len()).unwrap();
    for v in &p.vertices {
        write_row(&mut out, v, Int::to_string);
    }
    out
}

/// Parse a triangulation file: points in lattice coordinates, cells as
/// zero-based index rows, optional weight layers.
pub fn read_triangulation(
    text: &str,
) -> Result<(Triangulation, Option<LayeredWeights>), String> {
    let mut c = Cursor::new(text);
    let (d, lattice) = read_dim_lattice(&mut c)?;
    let n = header(c.next()?, "POINTS").ok_or("expected `POINTS n`")??;
    if n == 0 {
        return Err("a triangulation needs points".into());
    }
    let mut points = Vec::with_capacity(n);
    for _ in 0..n {
        points.push(int_row(c.next()?, d)?);
    }
    let m = header(c.next()?, "CELLS").ok_or("expected `CELLS m`")??;
    if m == 0 {
        return Err("a triangulation needs cells".into());
    }
    let mut cells = Vec::with_capacity(m);
    for _ in 0..m {
        let row: Result<Vec<usize>, String> =
            c.next()?.split_whitespace().map(parse_usize).collect();
        let row = row?;
        if let Some(&bad) = row.iter().find(|&&i| i >= n) {
            return Err(format!("cell index {bad} out of range (n = {n})"));
        }
        cells.push(row);
    }
    let weights = if let Some(l) = c.peek() {
        if let Some(k) = header(l, "WEIGHT-LAYERS") {
            let k = k?;
            c.next()?;
            if k == 0 {
                return Err("WEIGHT-LAYERS needs at least one row".into());
            }
            let mut layers = Vec::with_capacity(k);
            for _ in 0..k {
                layers.push(RatVector(rat_row(c.next()?, n)?));
            }
            Some(LayeredWeights::new(layers))
        } else {
            None
        }
    } else {
        None
    };
    if !c.done() {
        return Err(format!("unexpected trailing line `{}`", c.next()?));
    }
    let config = PointConfiguration::new(lattice, points);
    let sub = Subdivision::new(config, cells);
    Ok((Triangulation::new(sub), weights))
}

/// Canonical triangulation file.
pub fn write_triangulation(
    t: &Triangulation,
    weights: Option<&LayeredWeights>,
) -> String {
    let mut out = String::new();
    write_dim_lattice(&mut out, &t.config.lattice);
    writeln!(out, "POINTS {}", t.config.len()).unwrap();
    for p in &t.config.points {
        write_row(&mut out, p, Int::to_string);
    }
    writeln!(out, "CELLS {}", t.cells.len()).unwrap();
    for cell in &t.cells {
        write_row(&mut out, cell, usize::to_string);
    }
    if let Some(w) = weights {
        writeln!(out, "WEIGHT-LAYERS {}", w.layers.len()).unwrap();
        for layer in &w.layers {
            write_row(&mut out, &layer.0, fmt_rat);
        }
    }
    out
}
