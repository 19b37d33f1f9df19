//! Library surface of the `fatarc` command-line tool: the script language
//! parser and the executor. The binary in `main.rs` is a thin wrapper; the
//! golden tests drive these entry points directly.

pub mod exec;
pub mod script;

pub use exec::{run_script, Options, RunOutput};
pub use script::{parse_script, Script, ScriptError};

/// Parse and run a script source in one step.
pub fn run_source(source: &str, opts: &Options) -> RunOutput {
    match parse_script(source) {
        Ok(script) => run_script(&script, opts),
        Err(e) => RunOutput { stdout: String::new(), error: Some(e.to_string()) },
    }
}
