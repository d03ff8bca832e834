//! Small named algebras used throughout the tests and the CLI demos.

use crate::families::make_a;
use crate::products::ActionMap;
use crate::table::AlgebraTable;

fn named(rows: Vec<Vec<usize>>, names: &[&str]) -> AlgebraTable {
    AlgebraTable::new(rows)
        .and_then(|t| t.with_names(names.iter().map(|s| s.to_string()).collect()))
        .expect("static example table")
}

/// `{1, x, y}` with `x·y = y·x = x`: two incomparable atoms.
pub fn three_element_example() -> AlgebraTable {
    named(
        vec![vec![0, 1, 2], vec![0, 0, 1], vec![0, 1, 0]],
        &["1", "x", "y"],
    )
}

/// `{1, x, y, z}` with order `1 > y` and `1 > x > z`.
pub fn four_element_ckl() -> AlgebraTable {
    named(
        vec![
            vec![0, 1, 2, 3],
            vec![0, 0, 2, 1],
            vec![0, 1, 0, 3],
            vec![0, 0, 2, 0],
        ],
        &["1", "x", "y", "z"],
    )
}

/// The seven-element CKL-algebra `{1, x1, …, x6}` whose Hasse diagram has
/// two minimal elements `x5` and `x6`.
pub fn seven_element_ckl() -> AlgebraTable {
    named(
        vec![
            vec![0, 1, 2, 3, 4, 5, 6],
            vec![0, 0, 2, 3, 4, 5, 6],
            vec![0, 0, 0, 3, 4, 5, 6],
            vec![0, 0, 2, 0, 4, 3, 4],
            vec![0, 0, 0, 3, 0, 5, 3],
            vec![0, 0, 2, 0, 4, 0, 4],
            vec![0, 0, 0, 0, 0, 3, 0],
        ],
        &["1", "x1", "x2", "x3", "x4", "x5", "x6"],
    )
}

/// `{1, u}` acting on [`three_element_example`] with `ρ_u` the constant map to 1.
pub fn semidirect_example_action() -> ActionMap {
    let y = make_a(2)
        .expect("A_2")
        .with_names(vec!["1".into(), "u".into()])
        .expect("names");
    ActionMap::new(three_element_example(), y, vec![vec![0, 1, 2], vec![0, 0, 0]])
        .expect("valid example action")
}
