//! Shared inputs for the benchmarks.

/// The sample scripts shipped with the core test data, by name.
pub const CORPUS: [(&str, &str); 3] = [
    (
        "excluded_middle",
        include_str!("../../core/tests/data/excluded_middle.secav"),
    ),
    (
        "instantiation",
        include_str!("../../core/tests/data/instantiation.secav"),
    ),
    (
        "branching",
        include_str!("../../core/tests/data/branching.secav"),
    ),
];

/// All sample scripts as one document.
pub fn joined_corpus() -> String {
    CORPUS
        .iter()
        .map(|(_, s)| *s)
        .collect::<Vec<_>>()
        .join("\n")
}
