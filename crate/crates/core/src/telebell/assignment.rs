//! ±1 labellings of the Bell eigenspaces and the observables they define.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::qlinalg::ComplexMatrix;
use crate::real::Real;
use crate::states::BellState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// How the four signs of one assignment split.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignSplit {
    /// Two of each sign.
    Balanced,
    /// Three of one sign.
    Lopsided,
    /// All equal; the observable is `±I`.
    Uniform,
}

/// `A = a|Ψ+⟩⟨Ψ+| + b|Ψ−⟩⟨Ψ−| + c|Φ+⟩⟨Φ+| + d|Φ−⟩⟨Φ−|` with `a, b, c, d = ±1`.
///
/// Serialised as a four-character string in `abcd` order, e.g. `"-+-+"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct BivalentAssignment {
    pub a: Sign,
    pub b: Sign,
    pub c: Sign,
    pub d: Sign,
}

impl BivalentAssignment {
    pub const fn new(a: Sign, b: Sign, c: Sign, d: Sign) -> Self {
        Self { a, b, c, d }
    }

    /// From integer signs; `None` unless every entry is ±1.
    pub fn from_signs(s: [i8; 4]) -> Option<Self> {
        let conv = |x: i8| match x {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        };
        Some(Self::new(conv(s[0])?, conv(s[1])?, conv(s[2])?, conv(s[3])?))
    }

    /// Bit `3 - k` of `index` set means sign `k` (in `abcd` order) is minus.
    pub fn from_index(index: u8) -> Self {
        let bit = |k: u8| if index >> (3 - k) & 1 == 1 { Sign::Minus } else { Sign::Plus };
        Self::new(bit(0), bit(1), bit(2), bit(3))
    }

    pub fn index(&self) -> u8 {
        self.signs()
            .iter()
            .fold(0, |acc, s| (acc << 1) | u8::from(*s == Sign::Minus))
    }

    /// All 16 assignments in index order.
    pub fn all() -> [Self; 16] {
        std::array::from_fn(|i| Self::from_index(i as u8))
    }

    pub fn signs(&self) -> [Sign; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn values<T: Real>(&self) -> [T; 4] {
        self.signs().map(Sign::value)
    }

    pub fn negated(&self) -> Self {
        Self::new(self.a.flip(), self.b.flip(), self.c.flip(), self.d.flip())
    }

    pub fn minus_count(&self) -> usize {
        self.signs().iter().filter(|&&s| s == Sign::Minus).count()
    }

    pub fn split(&self) -> SignSplit {
        match self.minus_count() {
            2 => SignSplit::Balanced,
            1 | 3 => SignSplit::Lopsided,
            _ => SignSplit::Uniform,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.split() == SignSplit::Uniform
    }

    /// `|Ψ−⟩⟨Ψ−| + |Φ−⟩⟨Φ−| − |Ψ+⟩⟨Ψ+| − |Φ+⟩⟨Φ+|`.
    pub const fn zukowski_first() -> Self {
        Self::new(Sign::Minus, Sign::Plus, Sign::Minus, Sign::Plus)
    }

    /// `|Ψ+⟩⟨Ψ+| + |Φ−⟩⟨Φ−| − |Ψ−⟩⟨Ψ−| − |Φ+⟩⟨Φ+|`.
    pub const fn zukowski_second() -> Self {
        Self::new(Sign::Plus, Sign::Minus, Sign::Minus, Sign::Plus)
    }
}

impl fmt::Display for BivalentAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.signs() {
            write!(f, "{}", s.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for BivalentAssignment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let signs: Vec<Sign> = s
            .chars()
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                other => Err(format!("invalid sign `{other}` in assignment `{s}`")),
            })
            .collect::<Result<_, _>>()?;
        match signs[..] {
            [a, b, c, d] => Ok(Self::new(a, b, c, d)),
            _ => Err(format!("assignment `{s}` must have four signs")),
        }
    }
}

impl From<BivalentAssignment> for String {
    fn from(a: BivalentAssignment) -> String {
        a.to_string()
    }
}

impl TryFrom<String> for BivalentAssignment {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Classes of assignment pairs by their sign splits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AssignmentClass {
    /// Both members split 2–2.
    I,
    /// One member 2–2, the other 3–1.
    II,
    /// Both members 3–1.
    III,
    /// At least one member is `±I`.
    #[serde(rename = "degenerate")]
    Degenerate,
}

impl AssignmentClass {
    pub const NON_DEGENERATE: [AssignmentClass; 3] =
        [AssignmentClass::I, AssignmentClass::II, AssignmentClass::III];
}

impl fmt::Display for AssignmentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AssignmentClass::I => "I",
            AssignmentClass::II => "II",
            AssignmentClass::III => "III",
            AssignmentClass::Degenerate => "degenerate",
        })
    }
}

pub fn classify(pair: (BivalentAssignment, BivalentAssignment)) -> AssignmentClass {
    use SignSplit::*;
    match (pair.0.split(), pair.1.split()) {
        (Uniform, _) | (_, Uniform) => AssignmentClass::Degenerate,
        (Balanced, Balanced) => AssignmentClass::I,
        (Lopsided, Lopsided) => AssignmentClass::III,
        _ => AssignmentClass::II,
    }
}

/// The 4×4 observable on qubits 1+2.
pub fn bivalent_observable<T: Real>(s: &BivalentAssignment) -> ComplexMatrix<T> {
    let [a, b, c, d] = s.values::<T>();
    let terms = [
        (a, BellState::PsiPlus),
        (b, BellState::PsiMinus),
        (c, BellState::PhiPlus),
        (d, BellState::PhiMinus),
    ];
    terms
        .iter()
        .map(|&(w, bell)| bell.projector::<T>().scale_real(w))
        .reduce(|acc, m| &acc + &m)
        .expect("four terms")
}
