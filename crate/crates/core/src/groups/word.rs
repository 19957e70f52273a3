use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::GroupError;

/// A freely reduced word in generators `1..=k`; negative letters are inverses.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i32>", into = "Vec<i32>")]
pub struct Word {
    letters: Vec<i32>,
}

/// Cancels adjacent `g g^-1` pairs.
pub fn free_reduce(letters: &[i32]) -> Word {
    let mut out: Vec<i32> = Vec::with_capacity(letters.len());
    for &l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word { letters: out }
}

impl Word {
    pub fn new(letters: Vec<i32>) -> Result<Self, GroupError> {
        if letters.contains(&0) {
            return Err(GroupError::InvalidWord("letter 0".into()));
        }
        Ok(free_reduce(&letters))
    }

    pub fn identity() -> Self {
        Self::default()
    }

    /// The word `g_index`.
    pub fn generator(index: usize) -> Self {
        assert!(index >= 1, "generators are numbered from 1");
        Self {
            letters: vec![index as i32],
        }
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut v = self.letters.clone();
        v.extend_from_slice(&other.letters);
        free_reduce(&v)
    }

    pub fn pow(&self, n: i32) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut v = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            v.extend_from_slice(&base.letters);
        }
        free_reduce(&v)
    }

    /// Largest generator index used.
    pub fn max_generator(&self) -> usize {
        self.letters.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Exponent sum of each generator `1..=k`.
    pub fn exponent_sums(&self, k: usize) -> Vec<i64> {
        let mut sums = vec![0i64; k];
        for &l in &self.letters {
            sums[l.unsigned_abs() as usize - 1] += l.signum() as i64;
        }
        sums
    }

    /// Strips matching first/last letters `g ... g^-1`.
    pub fn cyclically_reduced(&self) -> Self {
        let l = &self.letters;
        let mut i = 0;
        let mut j = l.len();
        while j > i + 1 && l[i] == -l[j - 1] {
            i += 1;
            j -= 1;
        }
        Self {
            letters: l[i..j].to_vec(),
        }
    }

    /// Rotation by `k` letters; stays reduced only for cyclically reduced words.
    pub fn rotate(&self, k: usize) -> Self {
        let mut v = self.letters.clone();
        if !v.is_empty() {
            let n = v.len();
            v.rotate_left(k % n);
        }
        free_reduce(&v)
    }

    /// Renumbers generators by adding `offset` to every index.
    pub fn shifted(&self, offset: usize) -> Self {
        let o = offset as i32;
        Self {
            letters: self
                .letters
                .iter()
                .map(|&l| if l > 0 { l + o } else { l - o })
                .collect(),
        }
    }
}

impl TryFrom<Vec<i32>> for Word {
    type Error = GroupError;
    fn try_from(v: Vec<i32>) -> Result<Self, Self::Error> {
        Word::new(v)
    }
}

impl From<Word> for Vec<i32> {
    fn from(w: Word) -> Vec<i32> {
        w.letters
    }
}

fn letter_text(l: i32) -> String {
    let idx = l.unsigned_abs();
    if idx <= 26 {
        let c = (b'a' + (idx - 1) as u8) as char;
        if l > 0 {
            c.to_string()
        } else {
            c.to_ascii_uppercase().to_string()
        }
    } else {
        format!("[{l}]")
    }
}

/// `a..z` for generators 1..26, upper case for inverses, `[n]` / `[-n]` beyond.
/// The empty word prints as `1`.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for &l in &self.letters {
            f.write_str(&letter_text(l))?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::identity());
        }
        let mut letters = Vec::new();
        let mut chars = s.chars().peekable();
        while let Some(c) = chars.next() {
            match c {
                'a'..='z' => letters.push((c as u8 - b'a' + 1) as i32),
                'A'..='Z' => letters.push(-((c as u8 - b'A' + 1) as i32)),
                '[' => {
                    let mut num = String::new();
                    for d in chars.by_ref() {
                        if d == ']' {
                            break;
                        }
                        num.push(d);
                    }
                    let n: i32 = num
                        .trim()
                        .parse()
                        .map_err(|_| GroupError::InvalidWord(s.to_string()))?;
                    letters.push(n);
                }
                c if c.is_whitespace() => {}
                _ => return Err(GroupError::InvalidWord(s.to_string())),
            }
        }
        Word::new(letters)
    }
}

/// `<g_1, ..., g_k | r_1, ..., r_l>`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PresentationWire")]
pub struct Presentation {
    generators: usize,
    relators: Vec<Word>,
}

#[derive(Deserialize)]
struct PresentationWire {
    generators: usize,
    #[serde(default)]
    relators: Vec<Word>,
}

impl TryFrom<PresentationWire> for Presentation {
    type Error = GroupError;
    fn try_from(w: PresentationWire) -> Result<Self, Self::Error> {
        Presentation::new(w.generators, w.relators)
    }
}

impl Presentation {
    pub fn new(generators: usize, relators: Vec<Word>) -> Result<Self, GroupError> {
        if let Some(r) = relators.iter().find(|r| r.max_generator() > generators) {
            return Err(GroupError::GeneratorOutOfRange {
                word: r.to_string(),
                generators,
            });
        }
        Ok(Self {
            generators,
            relators,
        })
    }

    /// Parses relators written like `"aBa"`.
    pub fn parse(generators: usize, relators: &[&str]) -> Result<Self, GroupError> {
        let rels = relators
            .iter()
            .map(|r| r.parse())
            .collect::<Result<Vec<Word>, _>>()?;
        Self::new(generators, rels)
    }

    /// `<|>`.
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(k: usize) -> Self {
        Self {
            generators: k,
            relators: Vec::new(),
        }
    }

    pub fn cyclic(n: i32) -> Self {
        Self {
            generators: 1,
            relators: vec![Word::generator(1).pow(n)],
        }
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn with_relators(&self, extra: impl IntoIterator<Item = Word>) -> Result<Self, GroupError> {
        let mut rels = self.relators.clone();
        rels.extend(extra);
        Self::new(self.generators, rels)
    }

    pub fn with_generators(&self, extra: usize) -> Self {
        Self {
            generators: self.generators + extra,
            relators: self.relators.clone(),
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = (1..=self.generators as i32).map(letter_text).collect();
        let rels: Vec<String> = self.relators.iter().map(ToString::to_string).collect();
        write!(f, "<{} | {}>", gens.join(","), rels.join(","))
    }
}

/// Disjoint union of generators and relators; the second factor's indices are shifted.
pub fn free_product(p1: &Presentation, p2: &Presentation) -> Presentation {
    let k1 = p1.generators;
    let mut relators = p1.relators.clone();
    relators.extend(p2.relators.iter().map(|r| r.shifted(k1)));
    Presentation {
        generators: k1 + p2.generators,
        relators,
    }
}

/// Left-nested free product of all factors; `<|>` for an empty list.
pub fn free_product_all(factors: &[Presentation]) -> Presentation {
    factors
        .iter()
        .fold(Presentation::trivial(), |acc, p| free_product(&acc, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn reduction_examples() {
        assert!(free_reduce(&[1, -1]).is_empty());
        assert_eq!(free_reduce(&[1, 2, -2, 1]).letters(), &[1, 1]);
        let r = free_reduce(&[1, 2, -1]);
        assert_eq!(free_reduce(r.letters()), r);
    }

    #[test]
    fn text_round_trip() {
        for s in ["aBa", "1", "abAB", "[27]a[-30]"] {
            assert_eq!(w(s).to_string(), s);
        }
        assert!("a?".parse::<Word>().is_err());
        assert_eq!(w("aA"), Word::identity());
    }

    #[test]
    fn cyclic_reduction() {
        assert_eq!(w("abcA").cyclically_reduced(), w("bc"));
        assert_eq!(w("abAB").cyclically_reduced(), w("abAB"));
        assert_eq!(w("aba").rotate(1), w("baa"));
    }

    #[test]
    fn exponents_and_powers() {
        assert_eq!(w("abab").pow(-1), w("BABA"));
        assert_eq!(w("ab").pow(2).concat(&w("AAA")).exponent_sums(2), vec![-1, 2]);
    }

    #[test]
    fn product_of_cyclics() {
        let p = free_product(&Presentation::cyclic(2), &Presentation::cyclic(3));
        assert_eq!(p, Presentation::parse(2, &["aa", "bbb"]).unwrap());
        assert_eq!(free_product(&Presentation::trivial(), &Presentation::trivial()), Presentation::trivial());
        let q = Presentation::parse(2, &["abAB", "aaa"]).unwrap();
        let t = free_product_all(&[q.clone(), q.clone(), q]);
        assert_eq!((t.generator_count(), t.relators().len()), (6, 6));
    }

    #[test]
    fn generator_range_checked() {
        assert!(Presentation::parse(1, &["ab"]).is_err());
        let json = r#"{"generators": 2, "relators": [[1, 2, -1, -2]]}"#;
        let p: Presentation = serde_json::from_str(json).unwrap();
        assert_eq!(p.to_string(), "<a,b | abAB>");
        let back: Presentation = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<Presentation>(r#"{"generators": 1, "relators": [[2]]}"#).is_err());
    }
}
