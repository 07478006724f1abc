use thiserror::Error;

#[derive(Debug, Error)]
pub enum AdError {
    #[error("dimension mismatch in {op}: {detail}")]
    Dimension { op: &'static str, detail: String },

    #[error("contract violation in {op}: {detail}")]
    Contract { op: &'static str, detail: String },

    #[error("non-finite value encountered in {op}")]
    NonFinite { op: &'static str },
}

impl AdError {
    pub fn dimension(op: &'static str, detail: impl Into<String>) -> Self {
        AdError::Dimension {
            op,
            detail: detail.into(),
        }
    }

    pub fn contract(op: &'static str, detail: impl Into<String>) -> Self {
        AdError::Contract {
            op,
            detail: detail.into(),
        }
    }
}
