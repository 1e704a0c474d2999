//! Bundled data files: plumbing graphs, enhanced intersection forms, and
//! knot diagrams used throughout the test suite and resolvable by name from
//! the CLI.

/// Star: four −2 vertices around the second one, a −3 leaf. |det| = 9.
pub const W1: &str = include_str!("../fixtures/w1.json");
/// Chain of five −2 vertices with a −3 leaf on the middle. |det| = 9.
pub const W2: &str = include_str!("../fixtures/w2.json");
/// Two −3 vertices grafted onto a −2 chain. |det| = 25.
pub const W3: &str = include_str!("../fixtures/w3.json");
/// Chain of six −2 vertices with a −3 leaf on the third. |det| = 9.
pub const W4: &str = include_str!("../fixtures/w4.json");
/// Enhanced form over the boundary of W1; one handle, kernel denominator 3.
pub const A1: &str = include_str!("../fixtures/a1.json");
/// Enhanced form over the boundary of W3; one handle, kernel denominator 5.
pub const A3: &str = include_str!("../fixtures/a3.json");

/// Right-handed trefoil as a two-strand braid closure. det 3.
pub const TREFOIL_PD: &str = include_str!("../fixtures/trefoil.pd");
/// Five-crossing twist knot, alternating, det 7.
pub const K5_2_PD: &str = include_str!("../fixtures/5_2.pd");
/// Eight-crossing non-alternating slice knot, det 9; the marked crossing of
/// its mirror sits first in the file.
pub const K8_20_PD: &str = include_str!("../fixtures/8_20.pd");
/// Nine-crossing pretzel presentation, non-alternating, det 9.
pub const K9_46_PD: &str = include_str!("../fixtures/9_46.pd");
/// Twelve-crossing pretzel presentation, non-alternating, det 25.
pub const K10_137_PD: &str = include_str!("../fixtures/10_137.pd");
/// Ten-crossing pretzel presentation, non-alternating, det 9.
pub const K10_140_PD: &str = include_str!("../fixtures/10_140.pd");

/// Bigraded homology table for the eight-crossing slice knot.
pub const K8_20_KH: &str = include_str!("../fixtures/8_20.kh.json");
/// Bigraded homology table for the nine-crossing pretzel knot.
pub const K9_46_KH: &str = include_str!("../fixtures/9_46.kh.json");
/// Bigraded homology table for the twelve-crossing pretzel presentation.
pub const K10_137_KH: &str = include_str!("../fixtures/10_137.kh.json");
/// Bigraded homology table for the ten-crossing pretzel presentation.
pub const K10_140_KH: &str = include_str!("../fixtures/10_140.kh.json");

const TABLE: &[(&str, &str)] = &[
    ("w1", W1),
    ("w2", W2),
    ("w3", W3),
    ("w4", W4),
    ("a1", A1),
    ("a3", A3),
    ("trefoil", TREFOIL_PD),
    ("5_2", K5_2_PD),
    ("8_20", K8_20_PD),
    ("9_46", K9_46_PD),
    ("10_137", K10_137_PD),
    ("10_140", K10_140_PD),
    ("8_20.kh", K8_20_KH),
    ("9_46.kh", K9_46_KH),
    ("10_137.kh", K10_137_KH),
    ("10_140.kh", K10_140_KH),
];

/// Finds a bundled fixture by name, accepting `w1`, `w1.json`, or `8_20.pd`.
pub fn lookup(name: &str) -> Option<&'static str> {
    let stem = name.strip_suffix(".json").or_else(|| name.strip_suffix(".pd")).unwrap_or(name);
    TABLE.iter().find(|(key, _)| *key == stem).map(|(_, text)| *text)
}

/// Names of all bundled fixtures.
pub fn names() -> Vec<&'static str> {
    TABLE.iter().map(|(key, _)| *key).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowdown::EnhancedForm;
    use crate::diagram::parse_pd;
    use crate::plumbing::WeightedGraph;

    #[test]
    fn lookup_accepts_stems_and_file_names() {
        assert_eq!(lookup("w1"), Some(W1));
        assert_eq!(lookup("w1.json"), Some(W1));
        assert_eq!(lookup("8_20.pd"), Some(K8_20_PD));
        assert_eq!(lookup("8_20.kh.json"), Some(K8_20_KH));
        assert_eq!(lookup("nope"), None);
        assert_eq!(names().len(), 16);
    }

    #[test]
    fn every_bundled_fixture_parses() {
        for name in ["w1", "w2", "w3", "w4"] {
            let g = WeightedGraph::parse(lookup(name).unwrap()).unwrap();
            assert!(!g.is_empty(), "{name}");
        }
        for name in ["a1", "a3"] {
            let f = EnhancedForm::parse(lookup(name).unwrap()).unwrap();
            assert_eq!(f.handle_count(), 1, "{name}");
        }
        for (name, crossings) in [
            ("trefoil", 3),
            ("5_2", 5),
            ("8_20", 8),
            ("9_46", 9),
            ("10_137", 12),
            ("10_140", 10),
        ] {
            let d = parse_pd(lookup(name).unwrap()).unwrap();
            assert_eq!(d.crossing_count(), crossings, "{name}");
            assert_eq!(d.components(), 1, "{name}");
        }
    }
}
