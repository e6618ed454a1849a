/// Triangular mesh of the unit square.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh2D {
    pub nodes: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    /// Longest edge length.
    pub h: f64,
}

/// Uniform right-triangle mesh with `cells_per_side²` squares, each cut along
/// its lower-left to upper-right diagonal. Node `(i, j)` has index
/// `i + j·(cells_per_side + 1)` and sits at `(i, j) / cells_per_side`.
pub fn build_mesh(cells_per_side: usize) -> Mesh2D {
    assert!(cells_per_side >= 1, "need at least one cell per side");
    let c = cells_per_side;
    let stride = c + 1;
    let hx = 1.0 / c as f64;
    let mut nodes = Vec::with_capacity(stride * stride);
    for j in 0..stride {
        for i in 0..stride {
            nodes.push([i as f64 * hx, j as f64 * hx]);
        }
    }
    let mut triangles = Vec::with_capacity(2 * c * c);
    for j in 0..c {
        for i in 0..c {
            let v00 = i + j * stride;
            let v10 = v00 + 1;
            let v01 = v00 + stride;
            let v11 = v01 + 1;
            triangles.push([v00, v10, v11]);
            triangles.push([v00, v11, v01]);
        }
    }
    Mesh2D {
        nodes,
        triangles,
        h: std::f64::consts::SQRT_2 / c as f64,
    }
}

impl Mesh2D {
    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Signed area of triangle `t` (positive for counter-clockwise vertices).
    pub fn signed_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t].map(|v| self.nodes[v]);
        0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
    }
}
