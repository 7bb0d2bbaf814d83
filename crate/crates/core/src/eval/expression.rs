use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The eight expression classes, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expression {
    Neutral,
    Angry,
    Contempt,
    Disgust,
    Fear,
    Happy,
    Sad,
    Surprise,
}

impl Expression {
    pub const ALL: [Expression; 8] = [
        Expression::Neutral,
        Expression::Angry,
        Expression::Contempt,
        Expression::Disgust,
        Expression::Fear,
        Expression::Happy,
        Expression::Sad,
        Expression::Surprise,
    ];

    pub const COUNT: usize = 8;

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Expression::Neutral => "neutral",
            Expression::Angry => "angry",
            Expression::Contempt => "contempt",
            Expression::Disgust => "disgust",
            Expression::Fear => "fear",
            Expression::Happy => "happy",
            Expression::Sad => "sad",
            Expression::Surprise => "surprise",
        }
    }

    /// Parses names, common synonyms and the numeric emotion codes used by
    /// CK+ label files (`0` neutral through `7` surprise, possibly written
    /// as a float such as `3.0000000e+00`).
    pub fn parse_label(text: &str) -> Option<Expression> {
        let t = text.trim().to_ascii_lowercase();
        let named = match t.as_str() {
            "neutral" => Some(Expression::Neutral),
            "angry" | "anger" => Some(Expression::Angry),
            "contempt" | "contemptuous" => Some(Expression::Contempt),
            "disgust" | "disgusted" => Some(Expression::Disgust),
            "fear" | "afraid" | "fearful" | "scared" => Some(Expression::Fear),
            "happy" | "happiness" | "joy" => Some(Expression::Happy),
            "sad" | "sadness" => Some(Expression::Sad),
            "surprise" | "surprised" => Some(Expression::Surprise),
            _ => None,
        };
        if named.is_some() {
            return named;
        }
        let code: f64 = t.parse().ok()?;
        if code.fract() != 0.0 || !(0.0..=7.0).contains(&code) {
            return None;
        }
        Some(Expression::ALL[code as usize])
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Expression {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Expression::parse_label(s).ok_or_else(|| Error::Argument(format!("unknown expression `{s}`")))
    }
}
