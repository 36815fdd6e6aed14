use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;

use super::injection::OIInjection;
use crate::error::{Error, Result};

/// Bitmask of the slots a coordinate belongs to.
pub type Letter = u16;

pub const L: Letter = 0b01;
pub const R: Letter = 0b10;
pub const B: Letter = 0b11;

pub const MAX_SLOTS: usize = 16;

/// Letters compare as their sorted slot lists, a proper prefix first.
/// On two slots this gives `L < B < R`.
pub fn letter_cmp(mut a: Letter, mut b: Letter) -> Ordering {
    loop {
        match (a == 0, b == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let (la, lb) = (a.trailing_zeros(), b.trailing_zeros());
        if la != lb {
            return la.cmp(&lb);
        }
        a &= a - 1;
        b &= b - 1;
    }
}

/// One factor of a product orbit: a word whose letters are nonempty slot sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        debug_assert!(letters.iter().all(|&l| l != 0));
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of positions carrying `slot`.
    pub fn count(&self, slot: usize) -> usize {
        self.0.iter().filter(|&&l| l & (1 << slot) != 0).count()
    }

    /// Positions carrying `slot`, as the injection `[n_slot] -> [len]`.
    pub fn slot_injection(&self, slot: usize) -> OIInjection {
        let values = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &l)| l & (1 << slot) != 0)
            .map(|(p, _)| p)
            .collect();
        OIInjection::new_unchecked(self.len(), values)
    }

    /// Swaps slots 0 and 1 of a two-slot word.
    pub fn transpose(&self) -> Word {
        Word(
            self.0
                .iter()
                .map(|&l| ((l & L) << 1) | ((l & R) >> 1))
                .collect(),
        )
    }

    /// Two-slot text form over `L`, `B`, `R`.
    pub fn parse_merge(s: &str) -> Result<Word> {
        s.chars()
            .enumerate()
            .map(|(i, c)| match c {
                'L' => Ok(L),
                'B' => Ok(B),
                'R' => Ok(R),
                _ => Err(Error::InvalidPattern(format!("unexpected {c:?} at {i} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn merge_string(&self) -> Option<String> {
        self.0
            .iter()
            .map(|&l| match l {
                L => Some('L'),
                B => Some('B'),
                R => Some('R'),
                _ => None,
            })
            .collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.0.iter().all(|&l| l == B)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| letter_cmp(a, b))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = self.merge_string() {
            return f.write_str(&s);
        }
        for &l in &self.0 {
            let slots = (0..MAX_SLOTS).filter(|k| l & (1 << k) != 0).map(|k| k + 1).join(",");
            write!(f, "{{{slots}}}")?;
        }
        Ok(())
    }
}

type WordCache = Mutex<HashMap<Vec<usize>, Arc<Vec<Word>>>>;

fn cache() -> &'static WordCache {
    static CACHE: OnceLock<WordCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Orbits of `R^(c_1) x ... x R^(c_s)`: words over nonempty slot sets in which
/// slot `k` occurs `c_k` times. Canonical order: length, then letters.
pub fn power_words(counts: &[usize]) -> Arc<Vec<Word>> {
    assert!(counts.len() <= MAX_SLOTS, "too many slots");
    if let Some(hit) = cache().lock().unwrap().get(counts) {
        return hit.clone();
    }
    let mut out = Vec::new();
    let mut remaining = counts.to_vec();
    let mut current = Vec::new();
    grow(&mut remaining, &mut current, &mut out);
    out.sort();
    let out = Arc::new(out);
    cache().lock().unwrap().insert(counts.to_vec(), out.clone());
    out
}

fn grow(remaining: &mut [usize], current: &mut Vec<Letter>, out: &mut Vec<Word>) {
    let avail: Letter = remaining
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .fold(0, |m, (k, _)| m | (1 << k));
    if avail == 0 {
        out.push(Word(current.clone()));
        return;
    }
    // Nonempty submasks of `avail`.
    let mut sub = avail;
    while sub != 0 {
        for (k, r) in remaining.iter_mut().enumerate() {
            if sub & (1 << k) != 0 {
                *r -= 1;
            }
        }
        current.push(sub);
        grow(remaining, current, out);
        current.pop();
        for (k, r) in remaining.iter_mut().enumerate() {
            if sub & (1 << k) != 0 {
                *r += 1;
            }
        }
        sub = (sub - 1) & avail;
    }
}

/// Orbits of `R^(n) x R^(m)`; there are `D(n, m)` of them.
pub fn merge_patterns(n: usize, m: usize) -> Arc<Vec<Word>> {
    power_words(&[n, m])
}

/// Two-slot words on `(n, m)` coordinates in which left coordinate `a` and
/// right coordinate `b` coincide for every `(a, b)` in `pairs`.
/// `pairs` must be strictly increasing in both entries.
pub fn constrained_merges(n: usize, m: usize, pairs: &[(usize, usize)]) -> Vec<Word> {
    let mut segments: Vec<Arc<Vec<Word>>> = Vec::with_capacity(pairs.len() + 1);
    let (mut pa, mut pb) = (0usize, 0usize);
    for &(a, b) in pairs {
        debug_assert!(a >= pa && b >= pb);
        segments.push(merge_patterns(a - pa, b - pb));
        pa = a + 1;
        pb = b + 1;
    }
    segments.push(merge_patterns(n - pa, m - pb));
    let mut out = Vec::new();
    for choice in segments.iter().map(|s| s.iter()).multi_cartesian_product() {
        let mut letters = Vec::with_capacity(n + m);
        for (k, w) in choice.iter().enumerate() {
            letters.extend_from_slice(&w.0);
            if k < pairs.len() {
                letters.push(B);
            }
        }
        out.push(Word(letters));
    }
    out.sort();
    out
}
