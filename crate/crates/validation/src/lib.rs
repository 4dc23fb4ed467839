//! Holds the `acceptance` test target, which checks the numeric claims the
//! library is built to reproduce. Run it with `cargo test -p lineperc-validation`.
