//! Built-in example systems.

pub struct CorpusEntry {
    pub name: &'static str,
    pub summary: &'static str,
    /// Certificate kind expected from `check` with default options.
    pub expected: &'static str,
    pub text: &'static str,
}

pub const CORPUS: &[CorpusEntry] = &[
    CorpusEntry {
        name: "kervaire",
        summary: "single equation x³ = g",
        expected: "Direct",
        text: "\
# x^3 = g: exponent sum 3, so the direct rank test applies
# expected: Direct
variables: x
constants: g
equation: x x x g'
",
    },
    CorpusEntry {
        name: "commutator3",
        summary: "pairwise commutators of three unknowns (open case)",
        expected: "Unknown",
        text: "\
# <a,b,c | [a,b], [b,c], [c,a]>: pi_2 is generated by the Hall-Witt identity.
# Whether this type is solvable is open; no certificate may be produced.
# expected: Unknown
variables: a b c
equation: a b a' b'
equation: b c b' c'
equation: c a c' a'
",
    },
    CorpusEntry {
        name: "commutator4",
        summary: "pairwise commutators of four unknowns (not universally solvable)",
        expected: "Unknown",
        text: "\
# <a,b,c,d | all six commutators>. Not universally solvable: if [a,c], [a,d],
# [b,c], [b,d] are trivial then [a,b] commutes with [c,d], so g1 and g6 must commute.
# expected: Unknown
variables: a b c d
constants: g1 g2 g3 g4 g5 g6
equation: a b a' b' g1'
equation: a c a' c' g2'
equation: a d a' d' g3'
equation: b c b' c' g4'
equation: b d b' d' g5'
equation: c d c' d' g6'
",
    },
    CorpusEntry {
        name: "gersten",
        summary: "Gersten's system with cancellation allowed",
        expected: "Unknown",
        text: "\
# a^2 = b^2 = g1, c^2 = d^2 = t^-1 g1 t, a b t c d t^-1 = g2  (Gersten 1987, Thm 6)
# The cancellation-free type a^2, b^2, c^2, d^2, abtcdt^-1 is solvable over any group,
# but this instance has no solution when [g1, g2] != 1. Exponent rank 4 of 5.
# expected: Unknown
variables: a b c d t
constants: g1 g2
equation: a a g1'
equation: b b g1'
equation: c c t' g1' t
equation: d d t' g1' t
equation: a b t c d t' g2'
",
    },
    CorpusEntry {
        name: "baumslag",
        summary: "Baumslag relator with [a,c] = g (no finite solution)",
        expected: "AssertedAspherical",
        text: "\
# (b a b^-1) a (b a b^-1)^-1 = a^2 forces a to be trivial or of infinite order,
# and [a,c] = g != 1 rules out the former, so there is no solution in a finite group.
# The presentation complex is aspherical (Chiswell-Collins-Huebschmann 1981, Thm 3.1).
# expected: AssertedAspherical
variables: a b c
constants: g
assert_aspherical = CCH81
equation: b a b' a b a' b' a' a'
equation: a c a' c' g'
",
    },
];

pub fn corpus_names() -> Vec<&'static str> {
    CORPUS.iter().map(|e| e.name).collect()
}

pub fn corpus_entry(name: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.name == name)
}
