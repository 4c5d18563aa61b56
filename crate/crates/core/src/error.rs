use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZwError {
    #[error("bad ring literal `{literal}`: {reason}")]
    Literal { literal: String, reason: String },

    #[error("operation `{op}` is unsupported over {ring}")]
    Unsupported { op: &'static str, ring: String },

    #[error("invalid generator: {0}")]
    Generator(String),

    #[error("arity mismatch at {pos}: left side has {left_out} outputs, right side has {right_in} inputs")]
    Arity { pos: usize, left_out: usize, right_in: usize },

    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("index {index} out of range (size {size})")]
    Index { index: usize, size: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("malformed input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, ZwError>;
