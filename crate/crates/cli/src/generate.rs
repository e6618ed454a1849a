use std::path::Path;

use skpik_core::discretize::{assemble_laplacian, assemble_mass, build_mesh};
use skpik_core::la::mm_write;

use crate::error::{io_err, CliError, CliResult};
use crate::point::MeshInfo;

/// Writes `M.mtx`, `K.mtx` (ν times the Laplacian, without regularization)
/// and `mesh.json` for a `cells × cells` unit-square mesh.
pub fn generate(cells: usize, nu: f64, out: &Path) -> CliResult<MeshInfo> {
    if cells == 0 {
        return Err(CliError::Usage("--mesh must be at least 1".into()));
    }
    if !(nu > 0.0) {
        return Err(CliError::Usage(format!("--nu must be positive, got {nu}")));
    }
    std::fs::create_dir_all(out).map_err(io_err(out))?;
    let mesh = build_mesh(cells);
    mm_write(out.join("M.mtx"), &assemble_mass(&mesh)?)?;
    mm_write(out.join("K.mtx"), &assemble_laplacian(&mesh)?.scaled(nu))?;
    let info = MeshInfo {
        schema_version: crate::output::SCHEMA_VERSION,
        n: mesh.n_nodes(),
        h: mesh.h,
        cells_per_side: cells,
    };
    let path = out.join("mesh.json");
    let text = serde_json::to_string_pretty(&info).expect("mesh info serializes");
    std::fs::write(&path, text + "\n").map_err(io_err(&path))?;
    Ok(info)
}
