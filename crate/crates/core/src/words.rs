//! Words in the free product `F_n * G`.
//!
//! Variables are numbered `0..n` and constants `0..c`; both are treated as
//! free letters, so the only cancellation ever applied is `b b⁻¹ = 1` for a
//! literal repeat of the same base. Group-ring elements live in `Z[F_n]` and
//! are keyed by reduced variable-only words.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("variable index {index} outside alphabet of {bound} variables")]
    UnknownVariable { index: usize, bound: usize },
    #[error("constant index {index} outside alphabet of {bound} constants")]
    UnknownConstant { index: usize, bound: usize },
    #[error("empty word has no root")]
    EmptyWord,
    #[error("word contains constants; a variable-only word is required")]
    HasConstants,
    #[error("malformed letter token `{0}`")]
    BadToken(String),
}

/// The base of a letter: a variable of `F_n` or an opaque constant of `G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Base {
    Var(usize),
    Const(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub base: Base,
    pub inverse: bool,
}

impl Letter {
    pub fn var(index: usize) -> Self {
        Letter { base: Base::Var(index), inverse: false }
    }

    pub fn var_inv(index: usize) -> Self {
        Letter { base: Base::Var(index), inverse: true }
    }

    pub fn constant(index: usize) -> Self {
        Letter { base: Base::Const(index), inverse: false }
    }

    pub fn constant_inv(index: usize) -> Self {
        Letter { base: Base::Const(index), inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter { base: self.base, inverse: !self.inverse }
    }

    /// +1 or -1.
    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn is_var(self) -> bool {
        matches!(self.base, Base::Var(_))
    }

    pub fn var_index(self) -> Option<usize> {
        match self.base {
            Base::Var(i) => Some(i),
            Base::Const(_) => None,
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.base == other.base && self.inverse != other.inverse
    }
}

/// Declared alphabet sizes, used to validate raw letter sequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Alphabet {
    pub variables: usize,
    pub constants: usize,
}

impl Alphabet {
    pub fn new(variables: usize, constants: usize) -> Self {
        Alphabet { variables, constants }
    }

    pub fn check(&self, letter: Letter) -> Result<(), WordError> {
        match letter.base {
            Base::Var(i) if i >= self.variables => Err(WordError::UnknownVariable {
                index: i,
                bound: self.variables,
            }),
            Base::Const(c) if c >= self.constants => Err(WordError::UnknownConstant {
                index: c,
                bound: self.constants,
            }),
            _ => Ok(()),
        }
    }
}

/// A finite sequence of letters.
///
/// Every constructor except [`Word::unreduced`] yields a freely reduced word,
/// and every algebraic operation here returns reduced words. Unreduced words
/// exist only to carry equations "as written".
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

/// Free reduction with alphabet validation.
pub fn reduce(raw: &[Letter], alphabet: &Alphabet) -> Result<Word, WordError> {
    for &l in raw {
        alphabet.check(l)?;
    }
    Ok(Word::reduce(raw.iter().copied()))
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    /// Freely reduce a letter sequence (stack-based, single pass).
    pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in raw {
            match out.last() {
                Some(&top) if top.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word { letters: out }
    }

    /// Keep the letters exactly as given.
    pub fn unreduced(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    /// Variable-only word from signed 1-based indices (`2` = x₂, `-2` = x₂⁻¹), reduced.
    pub fn from_signed(indices: &[i64]) -> Self {
        Word::reduce(indices.iter().map(|&s| {
            assert!(s != 0, "zero is not a letter");
            let i = (s.unsigned_abs() - 1) as usize;
            if s > 0 {
                Letter::var(i)
            } else {
                Letter::var_inv(i)
            }
        }))
    }

    /// Inverse of [`Word::from_signed`]; constants are rejected.
    pub fn to_signed(&self) -> Result<Vec<i64>, WordError> {
        self.letters
            .iter()
            .map(|l| match l.base {
                Base::Var(i) => Ok(l.sign() * (i as i64 + 1)),
                Base::Const(_) => Err(WordError::HasConstants),
            })
            .collect()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    pub fn reduced(&self) -> Word {
        Word::reduce(self.letters.iter().copied())
    }

    pub fn is_variable_only(&self) -> bool {
        self.letters.iter().all(|l| l.is_var())
    }

    pub fn max_var(&self) -> Option<usize> {
        self.letters.iter().filter_map(|l| l.var_index()).max()
    }

    pub fn max_const(&self) -> Option<usize> {
        self.letters
            .iter()
            .filter_map(|l| match l.base {
                Base::Const(c) => Some(c),
                Base::Var(_) => None,
            })
            .max()
    }

    /// Concatenate and reduce.
    pub fn mul(&self, other: &Word) -> Word {
        Word::reduce(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn pow(&self, r: usize) -> Word {
        Word::reduce((0..r).flat_map(|_| self.letters.iter().copied()))
    }

    /// `by · self · by⁻¹`, reduced.
    pub fn conjugate(&self, by: &Word) -> Word {
        by.mul(self).mul(&by.inverse())
    }

    /// Rotate left by `k` positions (no reduction).
    pub fn rotate(&self, k: usize) -> Word {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            let k = k % letters.len();
            letters.rotate_left(k);
        }
        Word { letters }
    }

    /// Delete all constants and reduce: the augmentation `F_n * G -> F_n`.
    pub fn augment(&self) -> Word {
        Word::reduce(self.letters.iter().copied().filter(|l| l.is_var()))
    }

    pub fn exponent_sum(&self, var: usize) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.base == Base::Var(var))
            .map(|l| l.sign())
            .sum()
    }

    /// Split a reduced word as `conjugator · core · conjugator⁻¹` with `core`
    /// cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let w = self.reduced();
        let n = w.letters.len();
        let mut k = 0;
        while n >= 2 * (k + 1) && w.letters[k].cancels(w.letters[n - 1 - k]) {
            k += 1;
        }
        let core = Word { letters: w.letters[k..n - k].to_vec() };
        let conj = Word { letters: w.letters[..k].to_vec() };
        (core, conj)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.letters.first(), self.letters.last()) {
                (Some(&a), Some(&b)) if self.letters.len() > 1 => !a.cancels(b),
                _ => true,
            }
    }

    /// Maximal root of a nonempty cyclically reduced word: `self = z^r` with
    /// `r` maximal. The shortest period dividing the length gives the root.
    pub fn max_root(&self) -> Result<(Word, usize), WordError> {
        let n = self.letters.len();
        if n == 0 {
            return Err(WordError::EmptyWord);
        }
        for d in 1..=n {
            if n % d != 0 {
                continue;
            }
            if (d..n).all(|i| self.letters[i] == self.letters[i - d]) {
                let z = Word { letters: self.letters[..d].to_vec() };
                return Ok((z, n / d));
            }
        }
        unreachable!("the full length is always a period")
    }

    /// Fox derivative ∂w/∂x_var in `Z[F_n]`.
    ///
    /// Walks the word once: an occurrence of `x` with reduced prefix `p`
    /// contributes `+p`, an occurrence of `x⁻¹` contributes `-p·x⁻¹`.
    pub fn fox_derivative(&self, var: usize) -> Result<GroupRingElement, WordError> {
        if !self.is_variable_only() {
            return Err(WordError::HasConstants);
        }
        let mut out = GroupRingElement::zero();
        let mut prefix = Word::empty();
        for &l in &self.letters {
            if l.base == Base::Var(var) {
                if l.inverse {
                    out.add_term(prefix.mul(&Word { letters: vec![l] }), -1);
                } else {
                    out.add_term(prefix.clone(), 1);
                }
            }
            prefix = prefix.mul(&Word { letters: vec![l] });
        }
        Ok(out)
    }

    /// Render with a per-base naming function, inverse marked by `'`.
    pub fn display_with<'a, F>(&'a self, name: F) -> DisplayWord<'a, F>
    where
        F: Fn(Base) -> String,
    {
        DisplayWord { word: self, name }
    }

    /// Parse tokens like `x1 x2' g1` produced by the default [`fmt::Display`].
    pub fn parse_default(text: &str) -> Result<Word, WordError> {
        let letters = text
            .split_whitespace()
            .map(parse_default_token)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Word::unreduced(letters))
    }
}

fn parse_default_token(tok: &str) -> Result<Letter, WordError> {
    let bad = || WordError::BadToken(tok.to_string());
    let (body, inverse) = match tok.strip_suffix('\'') {
        Some(b) => (b, true),
        None => (tok, false),
    };
    let (kind, digits) = body.split_at(body.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?);
    let idx: usize = digits.parse().map_err(|_| bad())?;
    if idx == 0 {
        return Err(bad());
    }
    let base = match kind {
        "x" => Base::Var(idx - 1),
        "g" => Base::Const(idx - 1),
        _ => return Err(bad()),
    };
    Ok(Letter { base, inverse })
}

pub struct DisplayWord<'a, F> {
    word: &'a Word,
    name: F,
}

impl<F: Fn(Base) -> String> fmt::Display for DisplayWord<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.word.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&(self.name)(l.base))?;
            if l.inverse {
                f.write_str("'")?;
            }
        }
        Ok(())
    }
}

pub fn default_name(base: Base) -> String {
    match base {
        Base::Var(i) => format!("x{}", i + 1),
        Base::Const(c) => format!("g{}", c + 1),
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        write!(f, "{}", self.display_with(default_name))
    }
}

// Words serialize as their default rendering ("x1 x2' g1"), "" for the identity.
impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.display_with(default_name).to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Word::parse_default(&text).map_err(serde::de::Error::custom)
    }
}

/// Element of the integral group ring `Z[F_n]`: reduced word → nonzero coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupRingElement {
    terms: BTreeMap<Word, i64>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, i64)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (w, c) in terms {
            out.add_term(w, c);
        }
        out
    }

    pub fn add_term(&mut self, word: Word, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let key = word.reduced();
        let entry = self.terms.entry(key.clone()).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, i64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn coefficient(&self, word: &Word) -> i64 {
        self.terms.get(word).copied().unwrap_or(0)
    }

    pub fn coefficient_sum(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn add(&self, other: &GroupRingElement) -> GroupRingElement {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), c);
        }
        out
    }

    /// Left multiplication by a group element.
    pub fn left_mul(&self, word: &Word) -> GroupRingElement {
        GroupRingElement::from_terms(self.terms().map(|(w, c)| (word.mul(w), c)))
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.terms().enumerate() {
            let sign = if c < 0 { "-" } else if k > 0 { "+" } else { "" };
            if k > 0 {
                f.write_str(" ")?;
            }
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sign}{w}")?;
            } else {
                write!(f, "{sign}{mag}*{w}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &[i64]) -> Word {
        Word::from_signed(s)
    }

    const A: i64 = 1;
    const B: i64 = 2;
    const C: i64 = 3;

    #[test]
    fn reduce_cancels_adjacent_inverses() {
        let g = Letter::constant(0);
        let x = Letter::var(0);
        let alpha = Alphabet::new(1, 1);
        assert!(reduce(&[x, x.inv()], &alpha).unwrap().is_empty());
        assert!(reduce(&[x, g, g.inv(), x.inv()], &alpha).unwrap().is_empty());
        let r = reduce(&[x, g, x.inv()], &alpha).unwrap();
        assert_eq!(r.letters(), &[x, g, x.inv()]);
    }

    #[test]
    fn reduce_rejects_unknown_symbols() {
        let alpha = Alphabet::new(1, 1);
        assert_eq!(
            reduce(&[Letter::var(1)], &alpha),
            Err(WordError::UnknownVariable { index: 1, bound: 1 })
        );
        assert!(matches!(
            reduce(&[Letter::constant(3)], &alpha),
            Err(WordError::UnknownConstant { .. })
        ));
    }

    #[test]
    fn distinct_constants_do_not_cancel() {
        let r = Word::reduce([Letter::constant(0), Letter::constant_inv(1)]);
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn augmentation_examples() {
        let x = Letter::var(0);
        let g = |i| Letter::constant(i);
        assert!(Word::unreduced(vec![x, g(0), x.inv()]).augment().is_empty());
        let w = Word::unreduced(vec![x, g(0), x, g(1), x, g(2)]);
        assert_eq!(w.augment(), w_pow(0, 3));
        let (a, b) = (Letter::var(0), Letter::var(1));
        let w = Word::unreduced(vec![a, b, a.inv(), g(0), b.inv()]);
        assert_eq!(w.augment(), Word::unreduced(vec![a, b, a.inv(), b.inv()]));
    }

    fn w_pow(var: usize, r: usize) -> Word {
        Word::unreduced(vec![Letter::var(var); r])
    }

    #[test]
    fn exponent_sums() {
        assert_eq!(w(&[A, B, -A, -B]).exponent_sum(0), 0);
        assert_eq!(w_pow(0, 3).exponent_sum(0), 3);
        // (bab⁻¹)a(bab⁻¹)⁻¹a⁻²: the a-letters read +1 +1 -1 -1 -1 over the spelling.
        let baumslag = w(&[B, A, -B, A, B, -A, -B, -A, -A]);
        assert_eq!(baumslag.exponent_sum(0), -1);
        assert_eq!(baumslag.exponent_sum(1), 0);
    }

    #[test]
    fn cyclic_reduction_examples() {
        assert_eq!(w(&[A, B, -A]).cyclic_reduce(), (w(&[B]), w(&[A])));
        assert_eq!(w(&[A, B, A, B]).cyclic_reduce(), (w(&[A, B, A, B]), Word::empty()));
        assert_eq!(Word::empty().cyclic_reduce(), (Word::empty(), Word::empty()));
        // a a⁻¹ pairs at both ends of a word that would otherwise vanish
        assert_eq!(w(&[A, -A]).cyclic_reduce(), (Word::empty(), Word::empty()));
    }

    #[test]
    fn max_root_examples() {
        assert_eq!(w(&[A, B, A, B]).max_root().unwrap(), (w(&[A, B]), 2));
        assert_eq!(w_pow(0, 3).max_root().unwrap(), (w(&[A]), 3));
        let comm = w(&[A, B, -A, -B]);
        assert_eq!(comm.max_root().unwrap(), (comm.clone(), 1));
        assert_eq!(Word::empty().max_root(), Err(WordError::EmptyWord));
    }

    #[test]
    fn fox_derivative_examples() {
        let x3 = w_pow(0, 3);
        let expect = GroupRingElement::from_terms([
            (Word::empty(), 1),
            (w(&[A]), 1),
            (w(&[A, A]), 1),
        ]);
        assert_eq!(x3.fox_derivative(0).unwrap(), expect);

        let comm = w(&[A, B, -A, -B]);
        let expect = GroupRingElement::from_terms([(Word::empty(), 1), (w(&[A, B, -A]), -1)]);
        assert_eq!(comm.fox_derivative(0).unwrap(), expect);

        assert!(w(&[B]).fox_derivative(0).unwrap().is_zero());
        assert_eq!(
            Word::unreduced(vec![Letter::constant(0)]).fox_derivative(0),
            Err(WordError::HasConstants)
        );
    }

    #[test]
    fn display_and_parse_round_trip() {
        let word = Word::unreduced(vec![Letter::var(0), Letter::constant_inv(1), Letter::var_inv(2)]);
        let text = word.display_with(default_name).to_string();
        assert_eq!(text, "x1 g2' x3'");
        assert_eq!(Word::parse_default(&text).unwrap(), word);
        assert!(Word::parse_default("y1").is_err());
        assert!(Word::parse_default("x0").is_err());
        let _ = C;
    }

    fn arb_word(vars: i64, max_len: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec((1..=vars).prop_flat_map(|v| prop_oneof![Just(v), Just(-v)]), 0..max_len)
    }

    fn arb_letters(max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec(
            (0usize..2, 0usize..3, any::<bool>()).prop_map(|(kind, idx, inverse)| Letter {
                base: if kind == 0 { Base::Var(idx) } else { Base::Const(idx) },
                inverse,
            }),
            0..max_len,
        )
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent(raw in arb_letters(24)) {
            let once = Word::reduce(raw.clone());
            prop_assert!(once.is_reduced());
            prop_assert_eq!(once.reduced(), once.clone());
        }

        #[test]
        fn augment_is_a_homomorphism(u in arb_letters(16), v in arb_letters(16)) {
            let (u, v) = (Word::unreduced(u), Word::unreduced(v));
            let lhs = u.mul(&v).augment();
            let rhs = u.augment().mul(&v.augment());
            prop_assert_eq!(lhs.clone(), rhs);
            prop_assert_eq!(lhs.augment(), lhs.clone());
            prop_assert!(lhs.is_variable_only());
        }

        #[test]
        fn fox_product_rule(u in arb_word(3, 12), v in arb_word(3, 12), var in 0usize..3) {
            let (u, v) = (w(&u), w(&v));
            let lhs = u.mul(&v).fox_derivative(var).unwrap();
            let rhs = u.fox_derivative(var).unwrap()
                .add(&v.fox_derivative(var).unwrap().left_mul(&u));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn fox_coefficient_sum_is_exponent_sum(u in arb_word(3, 16), var in 0usize..3) {
            let u = w(&u);
            prop_assert_eq!(u.fox_derivative(var).unwrap().coefficient_sum(), u.exponent_sum(var));
        }

        #[test]
        fn cyclic_reduce_recomposes(u in arb_word(3, 16)) {
            let u = w(&u);
            let (core, conj) = u.cyclic_reduce();
            prop_assert!(core.is_cyclically_reduced());
            prop_assert_eq!(conj.mul(&core).mul(&conj.inverse()), u);
        }
    }
}
