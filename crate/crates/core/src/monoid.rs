//! Index monoids for sequence rings: ℕ, ℤ, ℕ², ℤ² and the free monoid on {a, b}.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MonoidKind {
    Nat,
    Int,
    Nat2,
    Int2,
    FreeWord2,
}

impl MonoidKind {
    pub const ALL: [MonoidKind; 5] = [
        MonoidKind::Nat,
        MonoidKind::Int,
        MonoidKind::Nat2,
        MonoidKind::Int2,
        MonoidKind::FreeWord2,
    ];

    /// Number of integer components for numeric kinds, 0 for words.
    pub fn rank(self) -> usize {
        match self {
            MonoidKind::Nat | MonoidKind::Int => 1,
            MonoidKind::Nat2 | MonoidKind::Int2 => 2,
            MonoidKind::FreeWord2 => 0,
        }
    }

    pub fn is_commutative(self) -> bool {
        self != MonoidKind::FreeWord2
    }
}

impl fmt::Display for MonoidKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl std::str::FromStr for MonoidKind {
    type Err = MonoidError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "nat" | "n" => Ok(MonoidKind::Nat),
            "int" | "z" => Ok(MonoidKind::Int),
            "nat2" | "n2" => Ok(MonoidKind::Nat2),
            "int2" | "z2" => Ok(MonoidKind::Int2),
            "freeword2" | "free" | "words" => Ok(MonoidKind::FreeWord2),
            _ => Err(MonoidError::Parse(format!("unknown monoid '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MonoidError {
    #[error("monoid kind mismatch: {0} vs {1}")]
    KindMismatch(MonoidKind, MonoidKind),
    #[error("arithmetic overflow in monoid operation")]
    Overflow,
    #[error("{0}")]
    Parse(String),
}

/// An element of one of the supported monoids.
///
/// Words are strings over the letters `a` and `b`; constructors validate this.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonoidElem {
    Nat(u64),
    Int(i64),
    Nat2(u64, u64),
    Int2(i64, i64),
    Word(String),
}

impl MonoidElem {
    pub fn identity(kind: MonoidKind) -> Self {
        match kind {
            MonoidKind::Nat => MonoidElem::Nat(0),
            MonoidKind::Int => MonoidElem::Int(0),
            MonoidKind::Nat2 => MonoidElem::Nat2(0, 0),
            MonoidKind::Int2 => MonoidElem::Int2(0, 0),
            MonoidKind::FreeWord2 => MonoidElem::Word(String::new()),
        }
    }

    pub fn word(s: &str) -> Result<Self, MonoidError> {
        if let Some(c) = s.chars().find(|c| !matches!(c, 'a' | 'b')) {
            return Err(MonoidError::Parse(format!("letter '{c}' is not in {{a, b}}")));
        }
        Ok(MonoidElem::Word(s.to_string()))
    }

    pub fn kind(&self) -> MonoidKind {
        match self {
            MonoidElem::Nat(_) => MonoidKind::Nat,
            MonoidElem::Int(_) => MonoidKind::Int,
            MonoidElem::Nat2(..) => MonoidKind::Nat2,
            MonoidElem::Int2(..) => MonoidKind::Int2,
            MonoidElem::Word(_) => MonoidKind::FreeWord2,
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.kind())
    }

    /// Monoid product `self · rhs`.
    pub fn op(&self, rhs: &MonoidElem) -> Result<MonoidElem, MonoidError> {
        use MonoidElem::*;
        let ov = || MonoidError::Overflow;
        Ok(match (self, rhs) {
            (Nat(a), Nat(b)) => Nat(a.checked_add(*b).ok_or_else(ov)?),
            (Int(a), Int(b)) => Int(a.checked_add(*b).ok_or_else(ov)?),
            (Nat2(a, b), Nat2(c, d)) => Nat2(a.checked_add(*c).ok_or_else(ov)?, b.checked_add(*d).ok_or_else(ov)?),
            (Int2(a, b), Int2(c, d)) => Int2(a.checked_add(*c).ok_or_else(ov)?, b.checked_add(*d).ok_or_else(ov)?),
            (Word(a), Word(b)) => Word(format!("{a}{b}")),
            _ => return Err(MonoidError::KindMismatch(self.kind(), rhs.kind())),
        })
    }

    /// Largest `i` with `self = m'·aⁱ`; 0 for numeric kinds.
    pub fn a_power_suffix(&self) -> usize {
        match self {
            MonoidElem::Word(w) => w.bytes().rev().take_while(|&c| c == b'a').count(),
            _ => 0,
        }
    }

    /// Integer components of a numeric element (`None` for words).
    pub fn components(&self) -> Option<Vec<i64>> {
        match *self {
            MonoidElem::Nat(a) => Some(vec![a as i64]),
            MonoidElem::Int(a) => Some(vec![a]),
            MonoidElem::Nat2(a, b) => Some(vec![a as i64, b as i64]),
            MonoidElem::Int2(a, b) => Some(vec![a, b]),
            MonoidElem::Word(_) => None,
        }
    }

    /// Builds a numeric element from components; fails on negative entries for ℕ kinds.
    pub fn from_components(kind: MonoidKind, c: &[i64]) -> Result<Self, MonoidError> {
        let nat = |x: i64| u64::try_from(x).map_err(|_| MonoidError::Parse(format!("{x} is negative in a ℕ-indexed monoid")));
        match (kind, c) {
            (MonoidKind::Nat, [a]) => Ok(MonoidElem::Nat(nat(*a)?)),
            (MonoidKind::Int, [a]) => Ok(MonoidElem::Int(*a)),
            (MonoidKind::Nat2, [a, b]) => Ok(MonoidElem::Nat2(nat(*a)?, nat(*b)?)),
            (MonoidKind::Int2, [a, b]) => Ok(MonoidElem::Int2(*a, *b)),
            _ => Err(MonoidError::Parse(format!("{} components do not fit {kind}", c.len()))),
        }
    }

    /// Parses `"3"`, `"-1"`, `"(1,-2)"` or a word such as `"abba"`.
    /// The empty string is the empty word.
    pub fn parse(kind: MonoidKind, text: &str) -> Result<Self, MonoidError> {
        let text = text.trim();
        let bad = |what: &str| MonoidError::Parse(format!("'{text}' is not a valid {kind} element ({what})"));
        match kind {
            MonoidKind::FreeWord2 => Self::word(text),
            MonoidKind::Nat | MonoidKind::Int => {
                let inner = text.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(text);
                let v: i64 = inner.trim().parse().map_err(|_| bad("expected an integer"))?;
                Self::from_components(kind, &[v])
            }
            MonoidKind::Nat2 | MonoidKind::Int2 => {
                let inner = text
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| bad("expected (i,j)"))?;
                let parts: Vec<i64> = inner
                    .split(',')
                    .map(|p| p.trim().parse::<i64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| bad("expected integers"))?;
                if parts.len() != 2 {
                    return Err(bad("expected two components"));
                }
                Self::from_components(kind, &parts)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            MonoidElem::Nat(a) => Value::from(*a),
            MonoidElem::Int(a) => Value::from(*a),
            MonoidElem::Nat2(a, b) => Value::from(vec![*a, *b]),
            MonoidElem::Int2(a, b) => Value::from(vec![*a, *b]),
            MonoidElem::Word(w) => Value::from(w.as_str()),
        }
    }

    pub fn from_json(kind: MonoidKind, v: &Value) -> Result<Self, MonoidError> {
        let bad = || MonoidError::Parse(format!("JSON value {v} is not a {kind} element"));
        match (kind, v) {
            (MonoidKind::FreeWord2, Value::String(s)) => Self::word(s),
            (MonoidKind::Nat | MonoidKind::Int, Value::Number(n)) => {
                Self::from_components(kind, &[n.as_i64().ok_or_else(bad)?])
            }
            (MonoidKind::Nat2 | MonoidKind::Int2, Value::Array(items)) => {
                let c: Vec<i64> = items.iter().map(|x| x.as_i64().ok_or_else(bad)).collect::<Result<_, _>>()?;
                Self::from_components(kind, &c)
            }
            (_, Value::String(s)) => Self::parse(kind, s),
            _ => Err(bad()),
        }
    }
}

fn kind_rank(e: &MonoidElem) -> u8 {
    match e {
        MonoidElem::Nat(_) => 0,
        MonoidElem::Int(_) => 1,
        MonoidElem::Nat2(..) => 2,
        MonoidElem::Int2(..) => 3,
        MonoidElem::Word(_) => 4,
    }
}

/// Numeric kinds compare lexicographically on components, words by length
/// then lexicographically (`a < b`).
impl Ord for MonoidElem {
    fn cmp(&self, other: &Self) -> Ordering {
        use MonoidElem::*;
        match (self, other) {
            (Nat(a), Nat(b)) => a.cmp(b),
            (Int(a), Int(b)) => a.cmp(b),
            (Nat2(a, b), Nat2(c, d)) => (a, b).cmp(&(c, d)),
            (Int2(a, b), Int2(c, d)) => (a, b).cmp(&(c, d)),
            (Word(a), Word(b)) => a.len().cmp(&b.len()).then_with(|| a.cmp(b)),
            _ => kind_rank(self).cmp(&kind_rank(other)),
        }
    }
}

impl PartialOrd for MonoidElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MonoidElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonoidElem::Nat(a) => write!(f, "{a}"),
            MonoidElem::Int(a) => write!(f, "{a}"),
            MonoidElem::Nat2(a, b) => write!(f, "({a},{b})"),
            MonoidElem::Int2(a, b) => write!(f, "({a},{b})"),
            MonoidElem::Word(w) => f.write_str(w),
        }
    }
}

/// A finite box of monoid elements: an interval, a rectangle, or all words
/// up to a length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum WindowSpec {
    Nat { lo: u64, hi: u64 },
    Int { lo: i64, hi: i64 },
    Nat2 { lo: [u64; 2], hi: [u64; 2] },
    Int2 { lo: [i64; 2], hi: [i64; 2] },
    FreeWord2 { max_len: usize },
}

impl WindowSpec {
    pub fn kind(&self) -> MonoidKind {
        match self {
            WindowSpec::Nat { .. } => MonoidKind::Nat,
            WindowSpec::Int { .. } => MonoidKind::Int,
            WindowSpec::Nat2 { .. } => MonoidKind::Nat2,
            WindowSpec::Int2 { .. } => MonoidKind::Int2,
            WindowSpec::FreeWord2 { .. } => MonoidKind::FreeWord2,
        }
    }

    /// All elements of the window in ascending order.
    pub fn enumerate(&self) -> Vec<MonoidElem> {
        match *self {
            WindowSpec::Nat { lo, hi } => (lo..=hi).map(MonoidElem::Nat).collect(),
            WindowSpec::Int { lo, hi } => (lo..=hi).map(MonoidElem::Int).collect(),
            WindowSpec::Nat2 { lo, hi } => (lo[0]..=hi[0])
                .flat_map(|i| (lo[1]..=hi[1]).map(move |j| MonoidElem::Nat2(i, j)))
                .collect(),
            WindowSpec::Int2 { lo, hi } => (lo[0]..=hi[0])
                .flat_map(|i| (lo[1]..=hi[1]).map(move |j| MonoidElem::Int2(i, j)))
                .collect(),
            WindowSpec::FreeWord2 { max_len } => {
                let mut out = vec![MonoidElem::Word(String::new())];
                let mut layer = vec![String::new()];
                for _ in 0..max_len {
                    layer = layer
                        .iter()
                        .flat_map(|w| [format!("{w}a"), format!("{w}b")])
                        .collect();
                    out.extend(layer.iter().cloned().map(MonoidElem::Word));
                }
                out
            }
        }
    }

    pub fn contains(&self, m: &MonoidElem) -> bool {
        match (self, m) {
            (WindowSpec::Nat { lo, hi }, MonoidElem::Nat(a)) => lo <= a && a <= hi,
            (WindowSpec::Int { lo, hi }, MonoidElem::Int(a)) => lo <= a && a <= hi,
            (WindowSpec::Nat2 { lo, hi }, MonoidElem::Nat2(a, b)) => {
                (lo[0]..=hi[0]).contains(a) && (lo[1]..=hi[1]).contains(b)
            }
            (WindowSpec::Int2 { lo, hi }, MonoidElem::Int2(a, b)) => {
                (lo[0]..=hi[0]).contains(a) && (lo[1]..=hi[1]).contains(b)
            }
            (WindowSpec::FreeWord2 { max_len }, MonoidElem::Word(w)) => w.len() <= *max_len,
            _ => false,
        }
    }

    /// Parses the command-line forms `"0..24"`, `"-1..0,0..1"` or, for words,
    /// a maximum length such as `"4"`.
    pub fn parse(kind: MonoidKind, text: &str) -> Result<Self, MonoidError> {
        let bad = || MonoidError::Parse(format!("invalid {kind} window '{text}'"));
        let range = |s: &str| -> Result<(i64, i64), MonoidError> {
            let (a, b) = s.split_once("..").ok_or_else(bad)?;
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            Ok((a, b))
        };
        let nat = |x: i64| u64::try_from(x).map_err(|_| bad());
        let parts: Vec<&str> = text.split(',').collect();
        match (kind, parts.as_slice()) {
            (MonoidKind::Nat, [r]) => {
                let (lo, hi) = range(r)?;
                Ok(WindowSpec::Nat { lo: nat(lo)?, hi: nat(hi)? })
            }
            (MonoidKind::Int, [r]) => {
                let (lo, hi) = range(r)?;
                Ok(WindowSpec::Int { lo, hi })
            }
            (MonoidKind::Nat2, [r, s]) => {
                let (a, b) = range(r)?;
                let (c, d) = range(s)?;
                Ok(WindowSpec::Nat2 { lo: [nat(a)?, nat(c)?], hi: [nat(b)?, nat(d)?] })
            }
            (MonoidKind::Int2, [r, s]) => {
                let (a, b) = range(r)?;
                let (c, d) = range(s)?;
                Ok(WindowSpec::Int2 { lo: [a, c], hi: [b, d] })
            }
            (MonoidKind::FreeWord2, [n]) => {
                let n = n.trim().trim_start_matches("<=");
                Ok(WindowSpec::FreeWord2 { max_len: n.trim().parse().map_err(|_| bad())? })
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for WindowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowSpec::Nat { lo, hi } => write!(f, "[{lo}..{hi}]"),
            WindowSpec::Int { lo, hi } => write!(f, "[{lo}..{hi}]"),
            WindowSpec::Nat2 { lo, hi } => write!(f, "[{}..{}]x[{}..{}]", lo[0], hi[0], lo[1], hi[1]),
            WindowSpec::Int2 { lo, hi } => write!(f, "[{}..{}]x[{}..{}]", lo[0], hi[0], lo[1], hi[1]),
            WindowSpec::FreeWord2 { max_len } => write!(f, "words of length <= {max_len}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> MonoidElem {
        MonoidElem::word(s).unwrap()
    }

    #[test]
    fn identities() {
        assert_eq!(MonoidElem::identity(MonoidKind::Nat).to_string(), "0");
        assert_eq!(MonoidElem::identity(MonoidKind::Int2), MonoidElem::Int2(0, 0));
        assert_eq!(MonoidElem::identity(MonoidKind::FreeWord2), w(""));
    }

    #[test]
    fn products() {
        assert_eq!(MonoidElem::Nat2(1, 0).op(&MonoidElem::Nat2(0, 1)).unwrap(), MonoidElem::Nat2(1, 1));
        assert_eq!(w("ab").op(&w("ba")).unwrap(), w("abba"));
        assert_eq!(MonoidElem::Int(-3).op(&MonoidElem::Int(3)).unwrap(), MonoidElem::Int(0));
        assert_ne!(w("a").op(&w("b")).unwrap(), w("b").op(&w("a")).unwrap());
        assert!(MonoidElem::Nat(1).op(&MonoidElem::Int(1)).is_err());
    }

    #[test]
    fn suffix_of_a() {
        assert_eq!(w("baa").a_power_suffix(), 2);
        assert_eq!(w("").a_power_suffix(), 0);
        assert_eq!(w("ab").a_power_suffix(), 0);
    }

    #[test]
    fn windows() {
        let nat = WindowSpec::Nat { lo: 0, hi: 3 }.enumerate();
        assert_eq!(nat.iter().map(|m| m.to_string()).collect::<Vec<_>>(), ["0", "1", "2", "3"]);
        let words = WindowSpec::FreeWord2 { max_len: 1 }.enumerate();
        assert_eq!(words, vec![w(""), w("a"), w("b")]);
        let z2 = WindowSpec::Int2 { lo: [-1, 0], hi: [0, 1] }.enumerate();
        assert_eq!(
            z2,
            vec![
                MonoidElem::Int2(-1, 0),
                MonoidElem::Int2(-1, 1),
                MonoidElem::Int2(0, 0),
                MonoidElem::Int2(0, 1)
            ]
        );
        assert_eq!(WindowSpec::FreeWord2 { max_len: 4 }.enumerate().len(), 31);
    }

    #[test]
    fn enumeration_is_sorted() {
        let ws = WindowSpec::FreeWord2 { max_len: 3 }.enumerate();
        assert!(ws.windows(2).all(|p| p[0] < p[1]));
        let z2 = WindowSpec::Int2 { lo: [-2, -2], hi: [2, 2] }.enumerate();
        assert!(z2.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn window_json() {
        let spec: WindowSpec = serde_json::from_str(r#"{"kind":"Int2","lo":[-1,0],"hi":[4,4]}"#).unwrap();
        assert_eq!(spec, WindowSpec::Int2 { lo: [-1, 0], hi: [4, 4] });
        let back = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<WindowSpec>(&back).unwrap(), spec);
    }

    #[test]
    fn text_forms() {
        assert_eq!(MonoidElem::parse(MonoidKind::Int2, "(1,-2)").unwrap(), MonoidElem::Int2(1, -2));
        assert_eq!(MonoidElem::parse(MonoidKind::FreeWord2, "abba").unwrap(), w("abba"));
        assert!(MonoidElem::parse(MonoidKind::Nat, "-1").is_err());
        assert!(MonoidElem::parse(MonoidKind::FreeWord2, "abc").is_err());
        assert_eq!(WindowSpec::parse(MonoidKind::Nat, "0..24").unwrap(), WindowSpec::Nat { lo: 0, hi: 24 });
        assert_eq!(
            WindowSpec::parse(MonoidKind::Int2, "-1..0,0..1").unwrap(),
            WindowSpec::Int2 { lo: [-1, 0], hi: [0, 1] }
        );
    }
}
