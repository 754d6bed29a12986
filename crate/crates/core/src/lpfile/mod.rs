//! Reading and writing the LP file dialect described in `docs/lp-format.md`.
//!
//! The writer is canonical: a given [`LpProblem`] always produces the same
//! bytes, and `write(parse(write(p))) == write(p)`.

mod name;
mod parser;
mod writer;

pub use name::{LpFileName, NameError};
pub use parser::{parse_lp, ParseError, ParseErrorKind};
pub use writer::{format_number, write_lp};
