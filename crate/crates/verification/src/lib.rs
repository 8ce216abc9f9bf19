//! Holds the `acceptance` test target. Cargo runs test binaries in package
//! name order, so this package runs after every `qchain-*` crate and its
//! failures never hide their results.
