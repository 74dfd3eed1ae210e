#![allow(dead_code)]

use std::sync::Arc;

use calogero_core::rmatrix::{nonabelian_extend, AlekseevMeinrenken};
use calogero_core::{build_algebra, AlgebraDescriptor, DynamicalRMatrix, Instance};

/// The algebras the properties are checked on.
pub const CATALOG: [&str; 6] = ["sl2", "sl3", "su2", "su3", "sl2x3", "sl3x2"];

pub fn instance(name: &str) -> Arc<Instance> {
    let desc: AlgebraDescriptor = name.parse().unwrap();
    Arc::new(build_algebra(&desc).unwrap())
}

pub fn am(name: &str) -> Arc<dyn DynamicalRMatrix> {
    Arc::new(AlekseevMeinrenken::new(instance(name)))
}

pub fn pair(name: &str) -> (Arc<dyn DynamicalRMatrix>, Arc<dyn DynamicalRMatrix>) {
    let k = am(name);
    let f: Arc<dyn DynamicalRMatrix> = Arc::new(nonabelian_extend(k.clone()).unwrap());
    (k, f)
}
