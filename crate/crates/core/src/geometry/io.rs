//! Line-oriented mesh text format.
//!
//! ```text
//! dim n_vertices n_elements n_boundary
//! x [y]                 (n_vertices lines)
//! v0 v1 [v2]            (n_elements lines, 0-based)
//! v0 [v1] label         (n_boundary lines, label D or N)
//! ```
//!
//! Blank lines and lines starting with `#` are skipped by the reader.

use std::io::{BufRead, Write};

use super::{BoundaryEdge, BoundaryLabel, IntervalMesh, Mesh, MeshTopology, TriMesh};
use crate::error::{Error, Result};

pub fn write_mesh<W: Write>(mesh: &Mesh, mut w: W) -> Result<()> {
    match mesh {
        Mesh::Interval(m) => {
            writeln!(w, "1 {} {} 2", m.n_vertices(), m.n_elements())?;
            for &x in m.breakpoints() {
                writeln!(w, "{x:.16e}")?;
            }
            for e in 0..m.n_elements() {
                writeln!(w, "{} {}", e, e + 1)?;
            }
            for (v, label) in m.boundary() {
                writeln!(w, "{v} {}", label.as_char())?;
            }
        }
        Mesh::Triangle(m) => {
            writeln!(
                w,
                "2 {} {} {}",
                m.n_vertices(),
                m.n_elements(),
                m.boundary_edges().len()
            )?;
            for p in m.vertices() {
                writeln!(w, "{:.16e} {:.16e}", p[0], p[1])?;
            }
            for t in m.triangles() {
                writeln!(w, "{} {} {}", t[0], t[1], t[2])?;
            }
            for b in m.boundary_edges() {
                writeln!(w, "{} {} {}", b.vertices[0], b.vertices[1], b.label.as_char())?;
            }
        }
    }
    Ok(())
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    number: usize,
}

impl<R: BufRead> Lines<R> {
    /// Next non-blank, non-comment line split into tokens.
    fn next_tokens(&mut self, what: &str) -> Result<(usize, Vec<String>)> {
        loop {
            self.number += 1;
            match self.inner.next() {
                None => return Err(parse_err(self.number, format!("unexpected end of file, expected {what}"))),
                Some(line) => {
                    let line = line?;
                    let trimmed = line.trim();
                    if trimmed.is_empty() || trimmed.starts_with('#') {
                        continue;
                    }
                    return Ok((
                        self.number,
                        trimmed.split_whitespace().map(str::to_owned).collect(),
                    ));
                }
            }
        }
    }
}

fn expect_count(line: usize, tokens: &[String], n: usize, what: &str) -> Result<()> {
    if tokens.len() != n {
        return Err(parse_err(
            line,
            format!("{what}: expected {n} fields, found {}", tokens.len()),
        ));
    }
    Ok(())
}

fn num<T: std::str::FromStr>(line: usize, token: &str, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| parse_err(line, format!("{what}: cannot parse `{token}`")))
}

pub fn read_mesh<R: BufRead>(reader: R) -> Result<Mesh> {
    let mut lines = Lines {
        inner: reader.lines(),
        number: 0,
    };
    let (hl, header) = lines.next_tokens("header")?;
    expect_count(hl, &header, 4, "header")?;
    let dim: usize = num(hl, &header[0], "dim")?;
    let nv: usize = num(hl, &header[1], "n_vertices")?;
    let ne: usize = num(hl, &header[2], "n_elements")?;
    let nb: usize = num(hl, &header[3], "n_boundary")?;
    if dim != 1 && dim != 2 {
        return Err(parse_err(hl, format!("dim must be 1 or 2, got {dim}")));
    }

    let mut coords = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (l, t) = lines.next_tokens("vertex")?;
        expect_count(l, &t, dim, "vertex")?;
        let x: f64 = num(l, &t[0], "x")?;
        let y: f64 = if dim == 2 { num(l, &t[1], "y")? } else { 0.0 };
        coords.push(([x, y], l));
    }
    let mut elements = Vec::with_capacity(ne);
    for _ in 0..ne {
        let (l, t) = lines.next_tokens("element")?;
        expect_count(l, &t, dim + 1, "element")?;
        let mut ids = [0usize; 3];
        for (k, tok) in t.iter().enumerate() {
            let v: usize = num(l, tok, "vertex index")?;
            if v >= nv {
                return Err(parse_err(l, format!("vertex index {v} out of range 0..{nv}")));
            }
            ids[k] = v;
        }
        elements.push((ids, l));
    }
    let mut boundary = Vec::with_capacity(nb);
    for _ in 0..nb {
        let (l, t) = lines.next_tokens("boundary")?;
        expect_count(l, &t, dim + 1, "boundary")?;
        let label = BoundaryLabel::from_token(&t[dim])
            .ok_or_else(|| parse_err(l, format!("boundary label must be D or N, got `{}`", t[dim])))?;
        let mut ids = [0usize; 2];
        for k in 0..dim {
            let v: usize = num(l, &t[k], "vertex index")?;
            if v >= nv {
                return Err(parse_err(l, format!("vertex index {v} out of range 0..{nv}")));
            }
            ids[k] = v;
        }
        boundary.push((ids, label, l));
    }
    loop {
        lines.number += 1;
        match lines.inner.next() {
            None => break,
            Some(line) => {
                let line = line?;
                let t = line.trim();
                if !t.is_empty() && !t.starts_with('#') {
                    return Err(parse_err(lines.number, "unexpected trailing content"));
                }
            }
        }
    }

    if dim == 1 {
        for (k, (ids, l)) in elements.iter().enumerate() {
            if ids[0] != k || ids[1] != k + 1 {
                return Err(parse_err(
                    *l,
                    format!("1D element {k} must connect vertices {k} and {}", k + 1),
                ));
            }
        }
        if ne + 1 != nv {
            return Err(parse_err(hl, "1D mesh needs n_elements = n_vertices - 1"));
        }
        if nb != 2 {
            return Err(parse_err(hl, "1D mesh needs exactly 2 boundary lines"));
        }
        let mut left = None;
        let mut right = None;
        for (ids, label, l) in &boundary {
            match ids[0] {
                0 if left.is_none() => left = Some(*label),
                v if v + 1 == nv && right.is_none() => right = Some(*label),
                v => return Err(parse_err(*l, format!("vertex {v} is not an unlabelled endpoint"))),
            }
        }
        let pts = coords.iter().map(|(p, _)| p[0]).collect();
        let mesh = IntervalMesh::new(pts, left.unwrap(), right.unwrap())?;
        Ok(Mesh::Interval(mesh))
    } else {
        let vertices = coords.into_iter().map(|(p, _)| p).collect();
        let triangles = elements.into_iter().map(|(ids, _)| ids).collect();
        let boundary = boundary
            .into_iter()
            .map(|(ids, label, _)| BoundaryEdge {
                vertices: ids,
                label,
            })
            .collect();
        Ok(Mesh::Triangle(TriMesh::new(vertices, triangles, boundary)?))
    }
}
