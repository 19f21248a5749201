//! JSON encodings of library values.

use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::arith::interval::Interval;
use crate::arith::logreal::{ExtLogReal, LogReal, Quantity};
use crate::arith::rational::{fmt_rational, fmt_rational_full, Rational};
use crate::error::GvfError;
use crate::field::FieldElem;
use crate::places::Place;

pub const SCHEMA_VERSION: u32 = 1;

fn float(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x > 0.0 {
        json!("+inf")
    } else {
        json!("-inf")
    }
}

pub fn rational(q: &Rational) -> Value {
    json!(fmt_rational(q))
}

pub fn logreal(x: &LogReal) -> Value {
    let terms: Vec<Value> = x
        .prime_part()
        .iter()
        .map(|(p, q)| {
            let p = p.to_u64().map_or_else(|| json!(p.to_string()), |v| json!(v));
            json!({ "p": p, "q": fmt_rational_full(q) })
        })
        .collect();
    let alg: Vec<Value> = x
        .alg_part()
        .iter()
        .map(|(k, q)| {
            json!({ "d": k.d, "a": k.a.to_string(), "b": k.b.to_string(), "q": fmt_rational_full(q) })
        })
        .collect();
    json!({
        "logTerms": terms,
        "alg": alg,
        "units": fmt_rational_full(x.unit_part()),
        "text": x.to_string(),
        "approx": float(x.approx()),
    })
}

pub fn ext(x: &ExtLogReal) -> Value {
    match x {
        ExtLogReal::Finite(v) => logreal(v),
        ExtLogReal::PosInf => json!({ "infinite": "+inf", "approx": "+inf" }),
        ExtLogReal::NegInf => json!({ "infinite": "-inf", "approx": "-inf" }),
    }
}

pub fn interval(i: &Interval) -> Value {
    json!({ "lo": float(i.lo()), "hi": float(i.hi()), "approx": float(i.mid()) })
}

pub fn quantity(q: &Quantity) -> Value {
    match q {
        Quantity::Exact(x) => ext(x),
        Quantity::Approx(i) => interval(i),
    }
}

pub fn elem(x: &FieldElem) -> Value {
    json!(x.to_string())
}

pub fn elems(a: &[FieldElem]) -> Value {
    Value::Array(a.iter().map(elem).collect())
}

pub fn place(p: &Place) -> Value {
    json!(p.to_string())
}

pub fn error(e: &GvfError) -> Value {
    let mut v = json!({ "message": e.to_string() });
    let kind = match e {
        GvfError::Domain(_) => "domain",
        GvfError::FieldMismatch { expected, found } => {
            v["expected"] = json!(expected);
            v["found"] = json!(found);
            "fieldMismatch"
        }
        GvfError::Undefined(_) => "undefined",
        GvfError::NonExact(_) => "nonExact",
        GvfError::Unsupported(_) => "unsupported",
        GvfError::NonConvergence(_) => "nonConvergence",
        GvfError::Parse { offset, .. } => {
            v["column"] = json!(offset);
            "parse"
        }
        GvfError::BudgetExceeded { nodes } => {
            v["nodes"] = json!(nodes);
            "budgetExceeded"
        }
    };
    v["kind"] = json!(kind);
    v
}
