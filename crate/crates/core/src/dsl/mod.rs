//! A small pipeline language for chaining the operations of this crate.
//!
//! ```text
//! points x1, x2, x3;
//! let L = line(x1: 1/2, x2: 5/6, x3: 5/6);
//! let M = mc(L);
//! check M.h = {0: 2};
//! emit M;
//! ```

pub mod ast;
pub mod eval;
pub mod lexer;
pub mod parser;
pub mod pretty;

pub use eval::{eval_program, run_source, CheckResult, DslError, Evaluation, Trace, Value};
pub use parser::{parse_program, ParseError};
pub use pretty::pretty_program;
