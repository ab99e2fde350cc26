// Copyright (c) The skeinlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Exact computations with ribbon categories of `sl2` representations,
//! stated skein algebras of surfaces and their semiclassical Poisson brackets.

pub mod backend;
pub mod error;
pub mod holonomy;
pub mod linalg;
pub mod poisson;
pub mod scalars;
pub mod skein;
pub mod surface;
pub mod tangle;
pub mod verify;

pub use backend::{Backend, BackendKind, CgComponent, Gen, Morphism, ObjectExpr};
pub use error::{Error, Result};
pub use linalg::Mat;
pub use scalars::{RingMode, ScalarSeries, Q};
