//! Field output: legacy VTK and CSV.

use std::io::{BufRead, Write};
use std::sync::Arc;

use super::field::FeField;
use crate::error::{Error, Result};
use crate::geometry::{Mesh, MeshTopology};

const VTK_LINE: u8 = 3;
const VTK_TRIANGLE: u8 = 5;

/// Legacy ASCII VTK unstructured grid with point scalar `u`.
pub fn write_vtk<W: Write>(field: &FeField, mut w: W) -> Result<()> {
    let mesh = field.mesh();
    let nv = mesh.n_vertices();
    let ne = mesh.n_elements();
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "uniqfem field")?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET UNSTRUCTURED_GRID")?;
    writeln!(w, "POINTS {nv} double")?;
    for v in 0..nv {
        let p = mesh.vertex(v);
        writeln!(w, "{:.16e} {:.16e} 0", p[0], p[1])?;
    }
    let (per, cell_type) = match **mesh {
        Mesh::Interval(_) => (2, VTK_LINE),
        Mesh::Triangle(_) => (3, VTK_TRIANGLE),
    };
    writeln!(w, "CELLS {ne} {}", ne * (per + 1))?;
    for e in 0..ne {
        let vs = mesh.element_vertices(e);
        write!(w, "{per}")?;
        for v in vs {
            write!(w, " {v}")?;
        }
        writeln!(w)?;
    }
    writeln!(w, "CELL_TYPES {ne}")?;
    for _ in 0..ne {
        writeln!(w, "{cell_type}")?;
    }
    writeln!(w, "POINT_DATA {nv}")?;
    writeln!(w, "SCALARS u double 1")?;
    writeln!(w, "LOOKUP_TABLE default")?;
    for u in field.values() {
        writeln!(w, "{u:.16e}")?;
    }
    Ok(())
}

/// `vertex_id,x,u` (1D) or `vertex_id,x,y,u` (2D), 17 significant digits.
pub fn write_csv<W: Write>(field: &FeField, mut w: W) -> Result<()> {
    let mesh = field.mesh();
    let two_d = mesh.dim() == 2;
    writeln!(w, "{}", if two_d { "vertex_id,x,y,u" } else { "vertex_id,x,u" })?;
    for (v, u) in field.values().iter().enumerate() {
        let p = mesh.vertex(v);
        if two_d {
            writeln!(w, "{v},{:.16e},{:.16e},{u:.16e}", p[0], p[1])?;
        } else {
            writeln!(w, "{v},{:.16e},{u:.16e}", p[0])?;
        }
    }
    Ok(())
}

/// Read a field written by [`write_csv`] back onto `mesh`. Rows must list
/// every vertex exactly once; coordinates are not checked.
pub fn read_csv<R: BufRead>(reader: R, mesh: Arc<Mesh>) -> Result<FeField> {
    let nv = mesh.n_vertices();
    let cols = if mesh.dim() == 2 { 4 } else { 3 };
    let mut values = vec![f64::NAN; nv];
    let mut seen = vec![false; nv];
    let mut rows = 0;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let n = i + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with("vertex_id") {
            continue;
        }
        let parts: Vec<&str> = t.split(',').map(str::trim).collect();
        if parts.len() != cols {
            return Err(Error::Parse {
                line: n,
                message: format!("expected {cols} columns, found {}", parts.len()),
            });
        }
        let v: usize = parts[0].parse().map_err(|_| Error::Parse {
            line: n,
            message: format!("bad vertex id `{}`", parts[0]),
        })?;
        if v >= nv || seen[v] {
            return Err(Error::Parse {
                line: n,
                message: format!("vertex id {v} out of range or repeated (mesh has {nv})"),
            });
        }
        let u: f64 = parts[cols - 1].parse().map_err(|_| Error::Parse {
            line: n,
            message: format!("bad value `{}`", parts[cols - 1]),
        })?;
        seen[v] = true;
        values[v] = u;
        rows += 1;
    }
    if rows != nv {
        return Err(Error::InvalidOptions(format!(
            "field file has {rows} rows but the mesh has {nv} vertices"
        )));
    }
    FeField::from_values(mesh, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{two_triangle_square, uniform_interval, BoundaryLabel};

    #[test]
    fn csv_round_trip_bitwise() {
        let mesh: Arc<Mesh> = Arc::new(two_triangle_square().into());
        let f = FeField::from_values(mesh.clone(), vec![0.1, 1.0 / 3.0, -2e-300, 7.25]).unwrap();
        let mut buf = Vec::new();
        write_csv(&f, &mut buf).unwrap();
        let back = read_csv(buf.as_slice(), mesh).unwrap();
        assert_eq!(back.values(), f.values());
    }

    #[test]
    fn csv_row_count_checked() {
        let mesh: Arc<Mesh> = Arc::new(
            uniform_interval(0.0, 1.0, 2, BoundaryLabel::Dirichlet, BoundaryLabel::Dirichlet)
                .unwrap()
                .into(),
        );
        assert!(read_csv("vertex_id,x,u\n0,0,1\n1,0.5,2\n".as_bytes(), mesh.clone()).is_err());
        assert!(matches!(
            read_csv("0,0,1\n0,0.5,2\n2,1,0\n".as_bytes(), mesh),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn vtk_layout() {
        let mesh: Arc<Mesh> = Arc::new(two_triangle_square().into());
        let f = FeField::zeros(mesh);
        let mut buf = Vec::new();
        write_vtk(&f, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.contains("POINTS 4 double"));
        assert!(s.contains("CELLS 2 8"));
        assert!(s.contains("CELL_TYPES 2\n5\n5\n"));
        assert!(s.contains("SCALARS u double 1"));
    }
}
