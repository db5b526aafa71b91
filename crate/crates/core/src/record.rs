//! Serializable per-case and per-point verification records shared by the
//! p-adic and finite-field harnesses.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseKind {
    Theorem,
    Corollary,
    ModP,
    FiniteSpecial,
    FiniteGeneral,
    GsIdentity,
}

impl CaseKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseKind::Theorem => "theorem",
            CaseKind::Corollary => "corollary",
            CaseKind::ModP => "mod-p",
            CaseKind::FiniteSpecial => "finite-special",
            CaseKind::FiniteGeneral => "finite-general",
            CaseKind::GsIdentity => "gs-identity",
        }
    }
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which signs make the two sides agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ObservedSign {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
    /// Both signs agree, e.g. modulo 2.
    #[serde(rename = "+-1")]
    Either,
    #[serde(rename = "none")]
    Neither,
}

impl ObservedSign {
    pub fn from_matches(plus: bool, minus: bool) -> Self {
        match (plus, minus) {
            (true, true) => ObservedSign::Either,
            (true, false) => ObservedSign::Plus,
            (false, true) => ObservedSign::Minus,
            (false, false) => ObservedSign::Neither,
        }
    }

    pub fn admits(&self, sign: i8) -> bool {
        match self {
            ObservedSign::Plus => sign == 1,
            ObservedSign::Minus => sign == -1,
            ObservedSign::Either => true,
            ObservedSign::Neither => false,
        }
    }

    /// Intersection of the sign sets of two observations.
    pub fn meet(self, other: Self) -> Self {
        Self::from_matches(
            self.admits(1) && other.admits(1),
            self.admits(-1) && other.admits(-1),
        )
    }
}

impl fmt::Display for ObservedSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObservedSign::Plus => "+1",
            ObservedSign::Minus => "-1",
            ObservedSign::Either => "+-1",
            ObservedSign::Neither => "none",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRecord {
    pub point: String,
    pub lhs: String,
    pub rhs: String,
    #[serde(rename = "match")]
    pub matched: bool,
    /// Largest `k` with `lhs = rhs mod p^k` (p-adic cases only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matched_precision: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign_used: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observed_sign: Option<ObservedSign>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedPoint {
    pub point: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub id: String,
    pub kind: CaseKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub big_n: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Order of the residue field the points (or characters) live over.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted_sign: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observed_sign: Option<ObservedSign>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stability: Option<bool>,
    pub points: Vec<PointRecord>,
    pub skipped: Vec<SkippedPoint>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub pass: bool,
}

impl CaseRecord {
    pub fn new(id: String, kind: CaseKind) -> Self {
        Self {
            id,
            kind,
            p: None,
            big_n: None,
            r: None,
            d: None,
            f: None,
            n: None,
            q: None,
            modulus: None,
            l: None,
            predicted_sign: None,
            observed_sign: None,
            stability: None,
            points: Vec::new(),
            skipped: Vec::new(),
            notes: Vec::new(),
            pass: true,
        }
    }
}
