use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::reals::{APFunc, IntervalColoring, NColoring, UPSet};

/// Shape of a representation, used in kind-mismatch reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Set,
    Func,
    IntervalColoring,
    Coloring,
    Tuple,
    Seq,
    PsiImage,
}

impl Kind {
    pub fn keyword(self) -> &'static str {
        match self {
            Kind::Set => "set",
            Kind::Func => "func",
            Kind::IntervalColoring => "icol",
            Kind::Coloring => "ncol",
            Kind::Tuple => "tuple",
            Kind::Seq => "seq",
            Kind::PsiImage => "psi",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// A finite description of a real.
///
/// `Seq` stands for the ω-sequence that lists its entries and then repeats
/// the last one forever. `PsiImage(f)` is the set `ψ(f)` of the bounding to
/// pseudo-intersection morphism, kept symbolic because it is not ultimately
/// periodic.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Rep {
    Set(UPSet),
    Func(APFunc),
    IntervalColoring(IntervalColoring),
    Coloring(NColoring),
    Tuple(Vec<UPSet>),
    Seq(Vec<UPSet>),
    PsiImage(APFunc),
}

impl Rep {
    pub fn kind(&self) -> Kind {
        match self {
            Rep::Set(_) => Kind::Set,
            Rep::Func(_) => Kind::Func,
            Rep::IntervalColoring(_) => Kind::IntervalColoring,
            Rep::Coloring(_) => Kind::Coloring,
            Rep::Tuple(_) => Kind::Tuple,
            Rep::Seq(_) => Kind::Seq,
            Rep::PsiImage(_) => Kind::PsiImage,
        }
    }

    pub fn mismatch(&self, expected: &str) -> Error {
        Error::KindMismatch { expected: expected.to_string(), found: self.to_string() }
    }

    pub fn as_set(&self) -> Result<&UPSet> {
        match self {
            Rep::Set(s) => Ok(s),
            r => Err(r.mismatch("set")),
        }
    }

    pub fn as_func(&self) -> Result<&APFunc> {
        match self {
            Rep::Func(f) => Ok(f),
            r => Err(r.mismatch("func")),
        }
    }
}

impl From<UPSet> for Rep {
    fn from(s: UPSet) -> Self {
        Rep::Set(s)
    }
}

impl From<APFunc> for Rep {
    fn from(f: APFunc) -> Self {
        Rep::Func(f)
    }
}

fn join_sets(sets: &[UPSet]) -> String {
    sets.iter().map(UPSet::to_string).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.kind().keyword();
        match self {
            Rep::Set(s) => write!(f, "{k} {s}"),
            Rep::Func(g) => write!(f, "{k} {g}"),
            Rep::IntervalColoring(c) => write!(f, "{k} {c}"),
            Rep::Coloring(c) => write!(f, "{k} {c}"),
            Rep::Tuple(v) | Rep::Seq(v) => write!(f, "{k} {}", join_sets(v)),
            Rep::PsiImage(g) => write!(f, "{k} {g}"),
        }
    }
}

impl FromStr for Rep {
    type Err = Error;

    /// `<kind> <literal…>`, e.g. `set ε|10`, `func ;0;1`, `tuple ε|10 ε|01`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kw, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
        let rest = rest.trim();
        let sets = || -> Result<Vec<UPSet>> { rest.split_whitespace().map(str::parse).collect() };
        match kw {
            "set" => Ok(Rep::Set(rest.parse()?)),
            "func" => Ok(Rep::Func(rest.parse()?)),
            "icol" => Ok(Rep::IntervalColoring(IntervalColoring::new(rest.parse()?))),
            "ncol" => Ok(Rep::Coloring(rest.parse()?)),
            "tuple" => Ok(Rep::Tuple(sets()?)),
            "seq" => {
                let v = sets()?;
                if v.is_empty() {
                    return Err(Error::Parse("a sequence needs at least one entry".into()));
                }
                Ok(Rep::Seq(v))
            }
            "psi" => Ok(Rep::PsiImage(rest.parse()?)),
            _ => Err(Error::Parse(format!("unknown representation {s:?}"))),
        }
    }
}

impl Serialize for Rep {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rep {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_round_trip() {
        for lit in [
            "set ε|10",
            "func ;0;1",
            "func 3,1;4;2",
            "icol ;0;2",
            "ncol 4:ε|0123",
            "tuple ε|10 ε|01 0|1",
            "seq ε|10 ε|1",
            "psi ;0;1",
        ] {
            let r: Rep = lit.parse().unwrap();
            assert_eq!(r.to_string(), lit);
        }
        assert!("seq".parse::<Rep>().is_err());
        assert!("blob 1".parse::<Rep>().is_err());
    }
}
