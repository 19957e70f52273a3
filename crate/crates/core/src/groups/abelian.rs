use num_bigint::BigInt;
use num_traits::One;

use super::word::Presentation;
use crate::exactalg::{smith_normal_form, HomologyGroup, IntegerMatrix};

/// `k x l` matrix whose column `j` holds the exponent sums of relator `j`.
pub fn exponent_matrix(p: &Presentation) -> IntegerMatrix {
    let k = p.generator_count();
    let columns: Vec<Vec<BigInt>> = p
        .relators()
        .iter()
        .map(|r| r.exponent_sums(k).into_iter().map(BigInt::from).collect())
        .collect();
    IntegerMatrix::from_columns(k, &columns)
}

/// `H_1` of the presented group: free rank plus invariant factors above one.
pub fn abelianization(p: &Presentation) -> HomologyGroup {
    let snf = smith_normal_form(&exponent_matrix(p));
    let factors = snf.invariant_factors();
    HomologyGroup {
        betti: p.generator_count() - factors.len(),
        torsion: factors.into_iter().filter(|t| !t.is_one()).collect(),
    }
}
