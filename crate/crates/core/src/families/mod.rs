//! The chains `A_n` and `LH_n`, enumeration of small algebras, and the
//! classification checks run over them.

mod enumerate;
mod tails;
mod theorems;

pub use enumerate::{
    enumerate, run_enumeration, ClassFilter, EnumerationOutcome, EnumerationTask, DEFAULT_NODE_BUDGET,
    DEFAULT_TIME_BUDGET,
};
pub use tails::{tail_analysis, TailPlusWitness, TailReport};
pub use theorems::*;

use crate::error::{LalgError, Result};
use crate::table::AlgebraTable;

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(LalgError::MalformedTable("a chain needs at least one element".into()));
    }
    Ok(())
}

/// `A_n`: the chain `x_0 > … > x_{n-1}` with `x_i·x_j = x_{max(j-i, 0)}`.
pub fn make_a(n: usize) -> Result<AlgebraTable> {
    check_size(n)?;
    AlgebraTable::from_fn(n, |i, j| j.saturating_sub(i))
}

/// `LH_n`: the chain with `x_i·x_j = 1` if `i ≥ j` and `x_j` otherwise.
pub fn make_lh(n: usize) -> Result<AlgebraTable> {
    check_size(n)?;
    AlgebraTable::from_fn(n, |i, j| if i >= j { 0 } else { j })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::validate;

    #[test]
    fn closed_formulas() {
        let a3 = make_a(3).unwrap();
        assert_eq!(a3.op(1, 2), 1);
        let lh4 = make_lh(4).unwrap();
        assert_eq!(lh4.op(1, 3), 3);
        assert_eq!(lh4.op(3, 1), 0);
        assert_eq!(make_a(1).unwrap(), AlgebraTable::trivial());
        assert_eq!(make_lh(1).unwrap(), AlgebraTable::trivial());
        assert!(make_a(0).is_err() && make_lh(0).is_err());
    }

    #[test]
    fn class_profiles() {
        for n in 2..12 {
            let r = validate(&make_a(n).unwrap());
            assert!(r.is_ckl && r.is_linear && r.is_simple && r.is_bounded);
            assert_eq!(r.is_hilbert, n <= 2);
            let r = validate(&make_lh(n).unwrap());
            assert!(r.is_hilbert && r.is_linear);
            assert_eq!(r.is_simple, n == 2);
        }
    }
}
