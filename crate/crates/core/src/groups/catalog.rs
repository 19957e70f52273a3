//! Named presentations used in tests, benches and the example corpus.

use super::word::Presentation;

fn parsed(k: usize, rels: &[&str]) -> Presentation {
    Presentation::parse(k, rels).expect("catalog presentations are well formed")
}

/// `<a,b | (ab)^2 a^-3, a^3 b^-5>`, order 120, perfect.
pub fn binary_icosahedral() -> Presentation {
    parsed(2, &["ababAAA", "aaaBBBBB"])
}

/// `<a,b | a^2, b^3, (ab)^5>`, order 60.
pub fn alternating5() -> Presentation {
    parsed(2, &["aa", "bbb", "ababababab"])
}

/// `<a,b | a^2, b^3, (ab)^2>`, order 6.
pub fn symmetric3() -> Presentation {
    parsed(2, &["aa", "bbb", "abab"])
}

/// `<a,b | a b a^-1 b^-2, b a b^-1 a^-2>`: balanced, perfect and trivial.
pub fn two_generator_trivial() -> Presentation {
    parsed(2, &["abABB", "baBAA"])
}

/// Presentations of perfect groups (trivial abelianization), by name.
pub fn perfect_corpus() -> Vec<(&'static str, Presentation)> {
    vec![
        ("empty", Presentation::trivial()),
        ("killed_generator", parsed(1, &["a"])),
        ("two_killed_generators", parsed(2, &["a", "b"])),
        ("balanced_trivial", two_generator_trivial()),
        ("binary_icosahedral", binary_icosahedral()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::abelianization;

    #[test]
    fn corpus_is_perfect() {
        for (name, p) in perfect_corpus() {
            assert!(abelianization(&p).is_zero(), "{name}");
        }
        assert!(abelianization(&alternating5()).is_zero());
        assert!(!abelianization(&symmetric3()).is_zero());
    }
}
