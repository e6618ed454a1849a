use crate::error::{Error, Result};
use crate::la::LowRankMatrix;

/// State, adjoint and control recovered from `X = [Y, Λ/√β]`, all `n × m_T`.
#[derive(Debug, Clone)]
pub struct OptimalControl {
    pub state: LowRankMatrix,
    pub adjoint: LowRankMatrix,
    pub control: LowRankMatrix,
}

/// Slices and scales the right factor of `x`; the left factor is shared.
pub fn extract_solution(x: &LowRankMatrix, beta: f64) -> Result<OptimalControl> {
    let cols = x.n_cols();
    if !cols.is_multiple_of(2) {
        return Err(Error::DimensionMismatch(format!(
            "solution has {cols} columns; expected an even count 2*m_T"
        )));
    }
    let m_t = cols / 2;
    let left = x.left().clone();
    let right = x.right();
    let second = right.rows(m_t, m_t).into_owned();
    let sb = beta.sqrt();
    let block = |r| LowRankMatrix::new(left.clone(), r).expect("conformal factors");
    Ok(OptimalControl {
        state: block(right.rows(0, m_t).into_owned()),
        adjoint: block(&second * sb),
        control: block(&second / sb),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::la::DenseMatrix;

    #[test]
    fn scaling() {
        let left = DenseMatrix::from_element(1, 1, 1.0);
        let right = DenseMatrix::from_column_slice(2, 1, &[3.0, 2.0]);
        let x = LowRankMatrix::new(left, right).unwrap();
        let one = extract_solution(&x, 1.0).unwrap();
        assert_eq!(one.control.to_dense()[(0, 0)], 2.0);
        let four = extract_solution(&x, 4.0).unwrap();
        assert_eq!(four.adjoint.to_dense()[(0, 0)], 4.0);
        assert_eq!(four.control.to_dense()[(0, 0)], 1.0);
        assert_eq!(four.state.to_dense()[(0, 0)], 3.0);
    }

    #[test]
    fn odd_columns_rejected() {
        assert!(extract_solution(&LowRankMatrix::zeros(2, 3), 1.0).is_err());
    }
}
