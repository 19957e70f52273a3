use super::{ConcreteFds, FdsError};

fn same_grid(v: &ConcreteFds, w: &ConcreteFds) -> Result<(), FdsError> {
    if v.field() != w.field() {
        return Err(FdsError::GridMismatch(format!("fields {} and {}", v.field(), w.field())));
    }
    if v.grid() != w.grid() {
        return Err(FdsError::GridMismatch("grids differ; align first".into()));
    }
    Ok(())
}

/// Pointwise tensor product: dimensions multiply, steps are Kronecker products.
pub fn tensor(v: &ConcreteFds, w: &ConcreteFds) -> Result<ConcreteFds, FdsError> {
    same_grid(v, w)?;
    let dims = v.dims().iter().zip(w.dims()).map(|(a, b)| a * b).collect();
    let steps = v
        .steps()
        .iter()
        .zip(w.steps())
        .map(|(a, b)| a.kron(b))
        .collect::<Result<Vec<_>, _>>()?;
    ConcreteFds::new(
        v.field(),
        v.grid().to_vec(),
        dims,
        steps,
        v.is_stabilized() && w.is_stabilized(),
    )
}

/// Pointwise direct sum: dimensions add, steps are block diagonal.
pub fn direct_sum(v: &ConcreteFds, w: &ConcreteFds) -> Result<ConcreteFds, FdsError> {
    same_grid(v, w)?;
    let dims = v.dims().iter().zip(w.dims()).map(|(a, b)| a + b).collect();
    let steps = v
        .steps()
        .iter()
        .zip(w.steps())
        .map(|(a, b)| a.block_diag(b))
        .collect::<Result<Vec<_>, _>>()?;
    ConcreteFds::new(
        v.field(),
        v.grid().to_vec(),
        dims,
        steps,
        v.is_stabilized() && w.is_stabilized(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Field;
    use crate::fds::int_grid;

    #[test]
    fn tensor_of_linear_and_quadratic() {
        let xs = [1i64, 2, 3, 4, 5];
        let grid = int_grid(&xs);
        let lin: Vec<usize> = xs.iter().map(|&x| x as usize).collect();
        let quad: Vec<usize> = xs.iter().map(|&x| (x * x) as usize).collect();
        let v = ConcreteFds::from_rank_table(Field::F2, grid.clone(), &lin).unwrap();
        let w = ConcreteFds::from_rank_table(Field::F2, grid, &quad).unwrap();
        let t = tensor(&v, &w).unwrap();
        let cubes: Vec<usize> = xs.iter().map(|&x| (x * x * x) as usize).collect();
        assert_eq!(t.a_table().unwrap(), cubes);
    }

    #[test]
    fn sum_tables_add() {
        let grid = int_grid(&[1, 2, 3]);
        let v = ConcreteFds::from_rank_table(Field::F2, grid.clone(), &[1, 2, 4]).unwrap();
        let w = ConcreteFds::from_rank_table(Field::F2, grid, &[1, 1, 1]).unwrap();
        assert_eq!(direct_sum(&v, &w).unwrap().a_table().unwrap(), vec![2, 3, 5]);
    }

    #[test]
    fn mismatched_grids_rejected() {
        let v = ConcreteFds::constant(Field::F2, int_grid(&[1, 2]), 1, true).unwrap();
        let w = ConcreteFds::constant(Field::F2, int_grid(&[1, 3]), 1, true).unwrap();
        assert!(matches!(tensor(&v, &w), Err(FdsError::GridMismatch(_))));
    }
}
