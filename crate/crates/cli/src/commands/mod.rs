pub mod certify;
pub mod rate;
pub mod simulate;
pub mod tables;
pub mod tight;

use pgm_tight::ClassParams;
use serde_json::{Map, Value};

use crate::args::{Command, Common};
use crate::num::{usage, Arith, ArgScalar};
use crate::output::Report;

pub fn dispatch(command: &Command) -> anyhow::Result<Report> {
    match command {
        Command::Rate(a) => rate::run(a),
        Command::Simulate(a) => simulate::run(a),
        Command::Tight(a) => tight::run(a),
        Command::Certify(a) => certify::run(a),
        Command::Tables(a) => tables::run(a),
    }
}

pub fn common(command: &Command) -> &Common {
    match command {
        Command::Rate(a) => &a.common,
        Command::Simulate(a) => &a.common,
        Command::Tight(a) => &a.common,
        Command::Certify(a) => &a.common,
        Command::Tables(a) => &a.common,
    }
}

fn params<T: ArgScalar>(mu: &str, l: &str) -> anyhow::Result<ClassParams<T>> {
    ClassParams::new(T::parse_arg(mu)?, T::parse_arg(l)?).map_err(|e| usage(e.to_string()))
}

/// `None` and `opt` select `2/(L+mu)`.
fn step<T: ArgScalar>(gamma: Option<&str>, params: &ClassParams<T>) -> anyhow::Result<T> {
    let gamma = match gamma {
        None | Some("opt") => params.optimal_step(),
        Some(s) => T::parse_arg(s)?,
    };
    if gamma <= T::zero() {
        return Err(usage(format!("step size must be positive, got {gamma}")));
    }
    Ok(gamma)
}

fn config(arith: Arith) -> Map<String, Value> {
    let mut map = Map::new();
    map.insert("arithmetic".into(), arith.name().into());
    map
}

fn put<T: ArgScalar>(map: &mut Map<String, Value>, key: &str, v: &T) {
    let value = if T::is_exact() { Value::String(v.to_string()) } else { Value::from(v.to_f64()) };
    map.insert(key.into(), value);
}
