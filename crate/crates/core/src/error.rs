// Copyright (c) The skeinlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Error type shared by every module.

use thiserror::Error;

/// Convenience alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Operands live over different rings, or the ring is unsuitable.
    #[error("mode error: {0}")]
    Mode(String),
    /// `part1` applied to an element with nonzero constant term.
    #[error("part1 is only defined on elements with vanishing constant term")]
    Part1Domain,
    /// Unknown or unsupported object label.
    #[error("label error: {0}")]
    Label(String),
    /// Clebsch-Gordan data unavailable.
    #[error("Clebsch-Gordan error: {0}")]
    Cg(String),
    /// Requested truncation order not supported by the backend.
    #[error("truncation order {0} unsupported by this backend")]
    TruncationUnsupported(usize),
    /// Shape mismatch between morphisms or matrices.
    #[error("shape error: {0}")]
    Shape(String),
    /// Ill-formed tangle word.
    #[error("word error: {0}")]
    Word(String),
    /// Move pattern does not match at the requested site.
    #[error("move error: {0}")]
    Move(String),
    /// Invalid fusion request.
    #[error("fusion error: {0}")]
    Fusion(String),
    /// Incompatible skein elements.
    #[error("algebra error: {0}")]
    Algebra(String),
    /// Elements not in general position for the intersection rule.
    #[error("position error: {0}")]
    Position(String),
    /// A coefficient module failed to be free.
    #[error("torsion detected: {0}")]
    Torsion(String),
    /// Malformed input.
    #[error("parse error: {0}")]
    Parse(String),
}
