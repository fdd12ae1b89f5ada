use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

use super::rep::Rep;
use crate::error::{Error, Result};

/// A total, deterministic map between representations.
pub trait Machine: Send + Sync {
    fn name(&self) -> &str;
    fn apply(&self, input: &Rep) -> Result<Rep>;
}

type RepFn = dyn Fn(&Rep) -> Result<Rep> + Send + Sync;

/// A machine backed by a Rust closure.
pub struct FnMachine {
    name: String,
    f: Box<RepFn>,
}

impl FnMachine {
    pub fn new(name: impl Into<String>, f: impl Fn(&Rep) -> Result<Rep> + Send + Sync + 'static) -> Self {
        FnMachine { name: name.into(), f: Box::new(f) }
    }

    pub fn arc(name: impl Into<String>, f: impl Fn(&Rep) -> Result<Rep> + Send + Sync + 'static) -> Arc<dyn Machine> {
        Arc::new(Self::new(name, f))
    }

    pub fn identity() -> Arc<dyn Machine> {
        Self::arc("id", |r| Ok(r.clone()))
    }

    pub fn constant(r: Rep) -> Arc<dyn Machine> {
        Self::arc(format!("const {r}"), move |_| Ok(r.clone()))
    }
}

impl Machine for FnMachine {
    fn name(&self) -> &str {
        &self.name
    }

    fn apply(&self, input: &Rep) -> Result<Rep> {
        (self.f)(input)
    }
}

/// `second ∘ first`.
pub struct Composed {
    name: String,
    first: Arc<dyn Machine>,
    second: Arc<dyn Machine>,
}

impl Composed {
    pub fn arc(first: Arc<dyn Machine>, second: Arc<dyn Machine>) -> Arc<dyn Machine> {
        let name = format!("{} ∘ {}", second.name(), first.name());
        Arc::new(Composed { name, first, second })
    }
}

impl Machine for Composed {
    fn name(&self) -> &str {
        &self.name
    }

    fn apply(&self, input: &Rep) -> Result<Rep> {
        self.second.apply(&self.first.apply(input)?)
    }
}

/// A child process answering one line per request line.
pub struct LineProcess {
    command: String,
    child: Child,
    stdin: ChildStdin,
    lines: Receiver<std::io::Result<String>>,
    timeout: Duration,
}

impl LineProcess {
    /// Runs `command` through `sh -c`.
    pub fn spawn(command: &str, timeout: Duration) -> Result<Self> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| Error::MachineFault(format!("cannot start {command:?}: {e}")))?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let (tx, lines) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Ok(LineProcess { command: command.into(), child, stdin, lines, timeout })
    }

    pub fn command(&self) -> &str {
        &self.command
    }

    /// Sends one request and waits for one answer line.
    pub fn ask(&mut self, request: &str) -> Result<String> {
        writeln!(self.stdin, "{request}")
            .and_then(|_| self.stdin.flush())
            .map_err(|e| Error::MachineFault(format!("{}: write failed on {request:?}: {e}", self.command)))?;
        match self.lines.recv_timeout(self.timeout) {
            Ok(Ok(line)) => Ok(line.trim().to_string()),
            Ok(Err(e)) => Err(Error::MachineFault(format!("{}: read failed on {request:?}: {e}", self.command))),
            Err(RecvTimeoutError::Timeout) => Err(Error::Budget(format!(
                "{} gave no answer within {:?} on input {request:?}",
                self.command, self.timeout
            ))),
            Err(RecvTimeoutError::Disconnected) => {
                Err(Error::MachineFault(format!("{} exited before answering {request:?}", self.command)))
            }
        }
    }
}

impl Drop for LineProcess {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// Default per-request time budget for external machines.
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);

/// An external machine: each request is a representation literal such as
/// `set ε|10`, each answer another literal.
pub struct ProcessMachine {
    name: String,
    process: Mutex<LineProcess>,
}

impl ProcessMachine {
    pub fn spawn(command: &str, timeout: Duration) -> Result<Self> {
        Ok(ProcessMachine { name: command.into(), process: Mutex::new(LineProcess::spawn(command, timeout)?) })
    }
}

impl Machine for ProcessMachine {
    fn name(&self) -> &str {
        &self.name
    }

    fn apply(&self, input: &Rep) -> Result<Rep> {
        let mut p = self.process.lock().map_err(|_| Error::MachineFault("machine lock poisoned".into()))?;
        let answer = p.ask(&input.to_string())?;
        answer
            .parse()
            .map_err(|e| Error::MachineFault(format!("{}: bad answer {answer:?} to {input}: {e}", self.name)))
    }
}
