//! Operator specifications: `identity`, `zero`, `heckepoly(NAME,K)` for one
//! coefficient, `heckepoly(NAME)` for the whole polynomial in `T`, and
//! products of these joined by `*`.

use tamenorm_core::catalog::CatalogEntry;
use tamenorm_core::coeffs::GroupAlgebraElement;
use tamenorm_core::rootdata::{hecke_polynomial, WeightOrbitRep};
use tamenorm_oracle::GradedOperator;

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Term {
    Identity,
    Zero,
    Coefficient(String, usize),
    Polynomial(String),
}

fn parse_term(s: &str) -> Result<Term, CliError> {
    let s = s.trim();
    match s {
        "identity" => return Ok(Term::Identity),
        "zero" => return Ok(Term::Zero),
        _ => {}
    }
    let inner = s
        .strip_prefix("heckepoly(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| CliError::Usage(format!("cannot parse operator term `{s}`")))?;
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [name] if !name.is_empty() => Ok(Term::Polynomial(name.to_string())),
        [name, k] if !name.is_empty() => {
            let k = k
                .parse()
                .map_err(|_| CliError::Usage(format!("bad coefficient index `{k}` in `{s}`")))?;
            Ok(Term::Coefficient(name.to_string(), k))
        }
        _ => Err(CliError::Usage(format!("cannot parse operator term `{s}`"))),
    }
}

fn polynomial(entry: &CatalogEntry, name: &str) -> Result<Vec<GroupAlgebraElement>, CliError> {
    let def = entry.operator(name).ok_or_else(|| {
        let known: Vec<&str> = entry.operators.iter().map(|o| o.name.as_str()).collect();
        CliError::Usage(format!("entry {} has no operator `{name}` (known: {})", entry.id(), known.join(", ")))
    })?;
    let v = WeightOrbitRep::new(&entry.datum.group, def.highest_weight.clone())
        .map_err(|e| CliError::Config(e.to_string()))?;
    hecke_polynomial(&entry.datum.group, &v).map_err(|e| CliError::Config(e.to_string()))
}

fn graded_mul(a: &GradedOperator, b: &GradedOperator) -> Result<GradedOperator, CliError> {
    let mut out: GradedOperator = Vec::new();
    for (i, x) in a {
        for (j, y) in b {
            let prod = x.mul(y).map_err(|e| CliError::Config(e.to_string()))?;
            match out.iter_mut().find(|(k, _)| *k == i + j) {
                Some((_, acc)) => *acc = acc.add(&prod).map_err(|e| CliError::Config(e.to_string()))?,
                None => out.push((i + j, prod)),
            }
        }
    }
    out.sort_by_key(|(k, _)| *k);
    Ok(out)
}

/// Parse a specification into `sum_k f_k T^k` on the entry's group lattice.
pub fn parse_operator(spec: &str, entry: &CatalogEntry) -> Result<GradedOperator, CliError> {
    let lat = &entry.datum.group.lattice;
    let mut acc: GradedOperator = vec![(0, GroupAlgebraElement::one(lat))];
    for term in spec.split('*') {
        let factor: GradedOperator = match parse_term(term)? {
            Term::Identity => vec![(0, GroupAlgebraElement::one(lat))],
            Term::Zero => vec![],
            Term::Coefficient(name, k) => {
                let poly = polynomial(entry, &name)?;
                let c = poly.get(k).ok_or_else(|| {
                    CliError::Usage(format!("heckepoly({name}) has degree {}, no coefficient {k}", poly.len() - 1))
                })?;
                vec![(0, c.clone())]
            }
            Term::Polynomial(name) => polynomial(entry, &name)?
                .into_iter()
                .enumerate()
                .map(|(k, c)| (k as i64, c))
                .collect(),
        };
        acc = graded_mul(&acc, &factor)?;
    }
    acc.retain(|(_, c)| !c.is_zero());
    Ok(acc)
}

/// The operator with `T = 1`, rejecting genuinely graded input.
pub fn ungraded(op: &GradedOperator, spec: &str) -> Result<GradedOperator, CliError> {
    if op.iter().any(|(k, _)| *k != 0) {
        return Err(CliError::Usage(format!(
            "`{spec}` involves the Hecke variable; pass --bundle to expand it on the augmented variety"
        )));
    }
    Ok(op.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terms_parse() {
        assert_eq!(parse_term(" identity ").unwrap(), Term::Identity);
        assert_eq!(parse_term("heckepoly(std, 1)").unwrap(), Term::Coefficient("std".into(), 1));
        assert_eq!(parse_term("heckepoly(std)").unwrap(), Term::Polynomial("std".into()));
        assert!(parse_term("heckepoly(std,x)").is_err());
        assert!(parse_term("hecke(std,1)").is_err());
        assert!(parse_term("heckepoly()").is_err());
    }
}
