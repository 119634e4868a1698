use thiserror::Error;

use crate::model::Menu;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground set must contain at least one alternative")]
    EmptyGroundSet,
    #[error("alternative labels must be non-empty")]
    EmptyLabel,
    #[error("duplicate alternative label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown alternative `{0}`")]
    UnknownLabel(String),
    #[error("alternative index {index} out of range for a ground set of size {n}")]
    AlternativeOutOfRange { index: usize, n: usize },
    #[error("menus must be nonempty")]
    EmptyMenu,
    #[error("ground set of size {n} exceeds the limit of {max} for this operation")]
    GroundSetTooLarge { n: usize, max: usize },
    #[error("ranking is not a permutation of 0..{n}")]
    InvalidOrder { n: usize },
    #[error("dataset is missing {} menu(s): {}", menus.len(), fmt_menus(menus))]
    MissingMenu { menus: Vec<Menu> },
    #[error("menu {menu} appears twice (rows {first_row} and {second_row})")]
    DuplicateMenu {
        menu: Menu,
        first_row: usize,
        second_row: usize,
    },
    #[error("row {row}: pick {pick} is not a member of menu {menu}")]
    PickNotInMenu { row: usize, menu: Menu, pick: usize },
    #[error("distortion index {index} out of range 0..{n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("j = {j} outside 1..={max}")]
    InvalidJ { j: usize, max: usize },
    #[error("no j in 1..={max} characterizes the choice")]
    NoCharacterizingJ { max: usize },
    #[error("brute-force sp = {bruteforce} disagrees with axiomatic sp = {axiomatic}")]
    CrossCheckMismatch { bruteforce: usize, axiomatic: usize },
    #[error("choice does not violate WARP under constant selection")]
    NotWeaklyHarmful,
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("relation is not transitively closed")]
    NotTransitive,
    #[error("relation contains a cycle")]
    CycleDetected,
    #[error("elicited relation is not a linear order")]
    RelationNotLinear,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("ground sets differ in size ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },
}

fn fmt_menus(menus: &[Menu]) -> String {
    menus
        .iter()
        .map(|m| m.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}
