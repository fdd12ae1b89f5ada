use std::fmt;
use std::sync::Mutex;
use std::time::Duration;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::triples::LineProcess;

/// A value of `ψ(c)(m)` as decided by a finite prefix of `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Answer {
    Zero,
    One,
    Undecided,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Zero => "0",
            Answer::One => "1",
            Answer::Undecided => "U",
        })
    }
}

/// A continuous `ψ: 2^ω → 2^ω` presented through its modulus: a prefix of
/// `c` either decides `ψ(c)(m)` or leaves it open. Decided answers must
/// persist under extension of the prefix.
pub trait ContinuousMachine: Send + Sync {
    fn name(&self) -> &str;
    fn query(&self, prefix: &[bool], m: usize) -> Result<Answer>;
    /// Whether concurrent queries are safe.
    fn concurrent(&self) -> bool {
        true
    }
}

/// Optional dense-open hook: an extension `t` of `s` whose cylinder lies in
/// the current dense open set.
pub trait DenseOpen: Send + Sync {
    fn extend(&self, level: usize, history: &[bool]) -> Vec<bool>;
}

/// `ψ(c) = c`.
pub struct IdentityMachine;

impl ContinuousMachine for IdentityMachine {
    fn name(&self) -> &str {
        "identity"
    }

    fn query(&self, prefix: &[bool], m: usize) -> Result<Answer> {
        Ok(match prefix.get(m) {
            Some(true) => Answer::One,
            Some(false) => Answer::Zero,
            None => Answer::Undecided,
        })
    }
}

/// `ψ(c)` is the constant sequence `value`.
pub struct ConstantMachine(pub bool);

impl ContinuousMachine for ConstantMachine {
    fn name(&self) -> &str {
        if self.0 {
            "all-ones"
        } else {
            "all-zeros"
        }
    }

    fn query(&self, _: &[bool], _: usize) -> Result<Answer> {
        Ok(if self.0 { Answer::One } else { Answer::Zero })
    }
}

type QueryFn = dyn Fn(&[bool], usize) -> Answer + Send + Sync;

pub struct FnContinuous {
    name: String,
    f: Box<QueryFn>,
}

impl FnContinuous {
    pub fn new(name: impl Into<String>, f: impl Fn(&[bool], usize) -> Answer + Send + Sync + 'static) -> Self {
        FnContinuous { name: name.into(), f: Box::new(f) }
    }
}

impl ContinuousMachine for FnContinuous {
    fn name(&self) -> &str {
        &self.name
    }

    fn query(&self, prefix: &[bool], m: usize) -> Result<Answer> {
        Ok((self.f)(prefix, m))
    }
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::Parse(format!("bad bit {c:?} in {s:?}"))),
        })
        .collect()
}

/// An external machine answering `QUERY <prefix-bits> <m>` with `0`, `1`
/// or `U`. An empty prefix is sent as `-`.
pub struct ProcessContinuous {
    name: String,
    process: Mutex<LineProcess>,
}

impl ProcessContinuous {
    pub fn spawn(command: &str, timeout: Duration) -> Result<Self> {
        Ok(ProcessContinuous { name: command.into(), process: Mutex::new(LineProcess::spawn(command, timeout)?) })
    }
}

impl ContinuousMachine for ProcessContinuous {
    fn name(&self) -> &str {
        &self.name
    }

    fn query(&self, prefix: &[bool], m: usize) -> Result<Answer> {
        let bits = if prefix.is_empty() { "-".to_string() } else { bits_to_string(prefix) };
        let request = format!("QUERY {bits} {m}");
        let mut p = self.process.lock().map_err(|_| Error::MachineFault("machine lock poisoned".into()))?;
        match p.ask(&request)?.as_str() {
            "0" => Ok(Answer::Zero),
            "1" => Ok(Answer::One),
            "U" => Ok(Answer::Undecided),
            other => Err(Error::MachineFault(format!("{}: bad answer {other:?} to {request:?}", self.name))),
        }
    }

    fn concurrent(&self) -> bool {
        false
    }
}
