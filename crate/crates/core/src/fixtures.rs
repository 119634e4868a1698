//! Hand-authored choice datasets used in tests, docs and the CLI examples.

use crate::model::{validate_choice, ChoiceFunction, GroundSet};

fn build(labels: &[&str], rows: &[(&str, &str)]) -> (GroundSet, ChoiceFunction) {
    let g = GroundSet::new(labels.iter().copied()).expect("fixture labels");
    let raw: Vec<_> = rows
        .iter()
        .map(|(menu, pick)| {
            let members: Vec<&str> = menu.split_whitespace().collect();
            (g.menu(&members).expect("fixture menu"), g.index_of(pick).expect("fixture pick"))
        })
        .collect();
    let (c, _) = validate_choice(&raw, &g).expect("fixture is a total choice");
    (g, c)
}

/// Donations `{0, 5, 20}`: the full menu picks 0, every pair picks the larger gift.
pub fn example1() -> (GroundSet, ChoiceFunction) {
    build(
        &["0", "5", "20"],
        &[("0 5 20", "0"), ("0 5", "5"), ("0 20", "20"), ("5 20", "5")],
    )
}

/// Dishes `{l, r, s}`.
pub fn example2() -> (GroundSet, ChoiceFunction) {
    build(
        &["l", "r", "s"],
        &[("l r s", "l"), ("l r", "r"), ("l s", "s"), ("r s", "s")],
    )
}

/// Projects `{h, mh, ml, l}` chosen under distortions 0, 1 and 2 of `h > mh > ml > l`.
pub fn example3() -> (GroundSet, ChoiceFunction) {
    build(
        &["h", "mh", "ml", "l"],
        &[
            ("h mh ml l", "h"),
            ("h mh ml", "ml"),
            ("h mh l", "mh"),
            ("h ml l", "h"),
            ("mh ml l", "ml"),
            ("h mh", "h"),
            ("h ml", "ml"),
            ("h l", "h"),
            ("mh ml", "mh"),
            ("mh l", "l"),
            ("ml l", "ml"),
        ],
    )
}

/// `{x, y, z}` with a single reversal between `xyz` and `xy`.
pub fn example4() -> (GroundSet, ChoiceFunction) {
    build(
        &["x", "y", "z"],
        &[("x y z", "x"), ("x y", "y"), ("y z", "z"), ("x z", "x")],
    )
}

/// Inconsistent choice on `{w, x, y, z}`.
pub fn example5() -> (GroundSet, ChoiceFunction) {
    build(
        &["w", "x", "y", "z"],
        &[
            ("w x y z", "w"),
            ("w x y", "x"),
            ("w x z", "z"),
            ("w y z", "y"),
            ("x y z", "x"),
            ("w x", "w"),
            ("w y", "w"),
            ("w z", "w"),
            ("x y", "y"),
            ("x z", "x"),
            ("y z", "z"),
        ],
    )
}
