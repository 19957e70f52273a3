use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::HandleError;

/// Group classifying normal framings of an isotropic sphere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObstructionGroup {
    Trivial,
    Z2,
    Unsupported,
}

impl fmt::Display for ObstructionGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Trivial => "0",
            Self::Z2 => "Z/2",
            Self::Unsupported => "unsupported",
        })
    }
}

/// `pi_s(O(m))` for the cases the construction needs: `pi_1(O(m)) = Z/2`
/// for `m >= 3`, `pi_2(O(m)) = 0` for `m > 2`, and a single oriented choice
/// on 0-spheres.
pub fn framing_obstruction_group(sphere_dim: usize, bundle_rank: usize) -> ObstructionGroup {
    match (sphere_dim, bundle_rank) {
        (0, _) => ObstructionGroup::Trivial,
        (1, m) if m >= 3 => ObstructionGroup::Z2,
        (2, m) if m > 2 => ObstructionGroup::Trivial,
        _ => ObstructionGroup::Unsupported,
    }
}

/// Homotopy-level record of a handle attaching triple: the sphere's
/// dimension, the cellular class it represents and a framing choice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HatDescriptor {
    pub sphere_dim: usize,
    pub bundle_rank: usize,
    #[serde(with = "crate::serde_util::bigint_vec")]
    pub homology_target: Vec<BigInt>,
    pub framing_bit: u8,
}

impl HatDescriptor {
    pub fn new(
        sphere_dim: usize,
        bundle_rank: usize,
        homology_target: Vec<BigInt>,
        framing_bit: u8,
    ) -> Result<Self, HandleError> {
        let group = framing_obstruction_group(sphere_dim, bundle_rank);
        let legal = match group {
            ObstructionGroup::Trivial => framing_bit == 0,
            ObstructionGroup::Z2 => framing_bit <= 1,
            ObstructionGroup::Unsupported => false,
        };
        if !legal {
            return Err(HandleError::IllegalFraming { bit: framing_bit, group });
        }
        Ok(Self {
            sphere_dim,
            bundle_rank,
            homology_target,
            framing_bit,
        })
    }

    pub fn obstruction_group(&self) -> ObstructionGroup {
        framing_obstruction_group(self.sphere_dim, self.bundle_rank)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_lookups() {
        assert_eq!(framing_obstruction_group(2, 5), ObstructionGroup::Trivial);
        assert_eq!(framing_obstruction_group(1, 4), ObstructionGroup::Z2);
        assert_eq!(framing_obstruction_group(1, 2), ObstructionGroup::Unsupported);
        assert_eq!(framing_obstruction_group(0, 1), ObstructionGroup::Trivial);
        assert_eq!(framing_obstruction_group(3, 9), ObstructionGroup::Unsupported);
    }

    #[test]
    fn framing_bits_checked() {
        assert!(HatDescriptor::new(1, 4, vec![BigInt::from(1)], 1).is_ok());
        assert!(HatDescriptor::new(2, 5, vec![], 1).is_err());
        assert!(HatDescriptor::new(1, 2, vec![], 0).is_err());
    }
}
