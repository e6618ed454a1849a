use crate::error::{Error, Result};
use crate::la::SparseMatrix;

use super::config::ProblemConfig;
use super::mesh::Mesh2D;

const AREA_FLOOR: f64 = 1e-300;

/// Per-element data: vertex indices, area and the P1 basis gradients.
struct Element {
    vertices: [usize; 3],
    area: f64,
    grads: [[f64; 2]; 3],
}

fn elements(mesh: &Mesh2D) -> Result<Vec<Element>> {
    (0..mesh.triangles.len())
        .map(|t| {
            let area = mesh.signed_area(t);
            if !(area > AREA_FLOOR) {
                return Err(Error::DegenerateTriangle { index: t, area });
            }
            let vertices = mesh.triangles[t];
            let [p0, p1, p2] = vertices.map(|v| mesh.nodes[v]);
            let twice = 2.0 * area;
            // ∇φ_k is the rotated opposite edge divided by 2·area
            let grad = |a: [f64; 2], b: [f64; 2]| [(a[1] - b[1]) / twice, (b[0] - a[0]) / twice];
            Ok(Element {
                vertices,
                area,
                grads: [grad(p1, p2), grad(p2, p0), grad(p0, p1)],
            })
        })
        .collect()
}

fn assemble(mesh: &Mesh2D, local: impl Fn(&Element, usize, usize) -> f64) -> Result<SparseMatrix> {
    let elems = elements(mesh)?;
    let mut triplets = Vec::with_capacity(9 * elems.len());
    for e in &elems {
        for a in 0..3 {
            for b in 0..3 {
                triplets.push((e.vertices[a], e.vertices[b], local(e, a, b)));
            }
        }
    }
    let n = mesh.n_nodes();
    Ok(SparseMatrix::from_triplets(n, n, &triplets))
}

/// Consistent P1 mass matrix.
pub fn assemble_mass(mesh: &Mesh2D) -> Result<SparseMatrix> {
    assemble(mesh, |e, a, b| {
        e.area / 12.0 * if a == b { 2.0 } else { 1.0 }
    })
}

/// P1 Laplacian `∫ ∇φ_a·∇φ_b` with natural boundary conditions.
pub fn assemble_laplacian(mesh: &Mesh2D) -> Result<SparseMatrix> {
    assemble(mesh, |e, a, b| {
        let (ga, gb) = (e.grads[a], e.grads[b]);
        e.area * (ga[0] * gb[0] + ga[1] * gb[1])
    })
}

/// `ν·L`, plus `ε·M` under elliptic regularization.
pub fn assemble_stiffness(mesh: &Mesh2D, config: &ProblemConfig) -> Result<SparseMatrix> {
    let laplacian = assemble_laplacian(mesh)?;
    let eps = config.stiffness_regularization();
    if eps > 0.0 {
        let mass = assemble_mass(mesh)?;
        SparseMatrix::linear_combination(config.nu, &laplacian, eps, &mass)
    } else {
        Ok(laplacian.scaled(config.nu))
    }
}
