//! Spec strings: input lists for products and thread-module descriptions.

use crate::CliError;
use wittcoh::cochain::{cohomology, Cochain};
use wittcoh::exactnum::{parse_rational, Rational};
use wittcoh::liealg::AlgebraKind;
use wittcoh::massey::MasseyInput;
use wittcoh::threadmod::ThreadSpec;

/// Weight of g^q_sign: (3q^2 - q)/2 for the minus label, (3q^2 + q)/2 for plus.
pub fn label_weight(q: usize, plus: bool) -> u32 {
    let q = q as u32;
    if plus {
        (3 * q * q + q) / 2
    } else {
        (3 * q * q - q) / 2
    }
}

/// First representative of H^q in weight w.
pub fn class_rep(q: usize, w: u32) -> Result<Cochain, CliError> {
    let report = cohomology(q, w, &AlgebraKind::L1Truncated(w.max(1))).map_err(|e| CliError::Parse(e.to_string()))?;
    report
        .representatives
        .first()
        .cloned()
        .ok_or_else(|| CliError::Parse(format!("H^{q} vanishes in weight {w}")))
}

fn split_coeff(tok: &str) -> Result<(Rational, &str), CliError> {
    let at = tok.find(|c: char| c.is_ascii_alphabetic()).ok_or_else(|| CliError::Parse(format!("no generator in '{tok}'")))?;
    let (c, rest) = tok.split_at(at);
    let coeff = match c {
        "" | "+" => Rational::from_integer(1.into()),
        "-" => Rational::from_integer((-1).into()),
        _ => parse_rational(c).map_err(|_| CliError::Parse(format!("bad coefficient '{c}'")))?,
    };
    Ok((coeff, rest))
}

fn base_form(name: &str) -> Result<Cochain, CliError> {
    let bad = || CliError::Parse(format!("unknown class '{name}'"));
    if let Some(k) = name.strip_prefix('e') {
        let k: u32 = k.parse().map_err(|_| bad())?;
        return if k == 0 { Err(bad()) } else { Ok(Cochain::e(k)) };
    }
    if let Some(rest) = name.strip_prefix('g') {
        let (q, sign) = rest.split_at(rest.len().saturating_sub(1));
        let q: usize = q.parse().map_err(|_| bad())?;
        let plus = match sign {
            "+" => true,
            "-" => false,
            _ => return Err(bad()),
        };
        if q == 0 {
            return Err(bad());
        }
        return class_rep(q, label_weight(q, plus));
    }
    if let Some(rest) = name.strip_prefix('h') {
        let (q, w) = rest.split_once('_').ok_or_else(bad)?;
        return class_rep(q.parse().map_err(|_| bad())?, w.parse().map_err(|_| bad())?);
    }
    Err(bad())
}

/// "e1^2, -2e2, g2+, h3_12" into product inputs. `^n` repeats a token.
pub fn parse_inputs(spec: &str) -> Result<Vec<MasseyInput>, CliError> {
    let mut out = Vec::new();
    for raw in spec.split(',') {
        let tok: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
        if tok.is_empty() {
            return Err(CliError::Parse(format!("empty entry in '{spec}'")));
        }
        let (body, times) = match tok.split_once('^') {
            Some((b, n)) => (b.to_string(), n.parse::<usize>().map_err(|_| CliError::Parse(format!("bad power in '{tok}'")))?),
            None => (tok.clone(), 1),
        };
        let (c, name) = split_coeff(&body)?;
        let form = base_form(name)?.scale(&c);
        let input = MasseyInput::new(form).ok_or_else(|| CliError::Parse(format!("'{tok}' is not a nonzero closed homogeneous form")))?;
        out.extend(std::iter::repeat_n(input, times));
    }
    if out.len() < 2 {
        return Err(CliError::Parse("a product needs at least two inputs".into()));
    }
    Ok(out)
}

/// "mtilde[-2,3]", "mtilde0[-1,4]", "a(1/6)[0,6]", "f(1/2,-1)[0,4]".
pub fn parse_module(spec: &str) -> Result<ThreadSpec, CliError> {
    let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || CliError::Parse(format!("bad module '{spec}'"));
    let (head, bounds) = s.split_once('[').ok_or_else(bad)?;
    let bounds = bounds.strip_suffix(']').ok_or_else(bad)?;
    let (m, n) = bounds.split_once(',').ok_or_else(bad)?;
    let (m, n): (i32, i32) = (m.parse().map_err(|_| bad())?, n.parse().map_err(|_| bad())?);
    if m > n {
        return Err(bad());
    }
    let args = |h: &str| -> Result<Vec<Rational>, CliError> {
        let inner = h.split_once('(').and_then(|(_, r)| r.strip_suffix(')')).ok_or_else(bad)?;
        inner.split(',').map(|x| parse_rational(x).map_err(|_| bad())).collect()
    };
    let spec = match head {
        "mtilde" => ThreadSpec::mtilde(),
        "mtilde0" => ThreadSpec::mtilde_nonzero(),
        h if h.starts_with("a(") => match args(h)?.as_slice() {
            [a] => ThreadSpec::a(a.clone()),
            _ => return Err(bad()),
        },
        h if h.starts_with("f(") => match args(h)?.as_slice() {
            [l, mu] => ThreadSpec::f(l.clone(), mu.clone()),
            _ => return Err(bad()),
        },
        _ => return Err(bad()),
    };
    Ok(spec.bounded(m, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use wittcoh::exactnum::{int, rat};

    #[test]
    fn inputs() {
        let v = parse_inputs("e1^2, e2, e1, g2+").unwrap();
        assert_eq!(v.len(), 5);
        assert_eq!(v[4].weight, 7);
        assert_eq!(v[4].form, Cochain::monomial(vec![1, 6], int(1)).add(&Cochain::monomial(vec![2, 5], rat(2, 3))));
        let w = parse_inputs("-2e1,1/3e2").unwrap();
        assert_eq!(w[0].form, Cochain::e(1).scale(&int(-2)));
        assert_eq!(w[1].form, Cochain::e(2).scale(&rat(1, 3)));
        assert_eq!(parse_inputs("g1-,g1+").unwrap()[1].form, Cochain::e(2));
        assert_eq!(parse_inputs("h2_5,e1").unwrap()[0].weight, 5);
    }

    #[test]
    fn rejects() {
        for bad in ["e3,e1", "e1", "x1,e2", "e1,,e2", "g2*,e1", "h2_6,e1", "e1^x,e2", "0e1,e2"] {
            assert!(matches!(parse_inputs(bad), Err(CliError::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn modules() {
        assert_eq!(parse_module("mtilde[-2,3]").unwrap(), ThreadSpec::mtilde().bounded(-2, 3));
        assert_eq!(parse_module("a(1/6)[0,6]").unwrap(), ThreadSpec::a(rat(1, 6)).bounded(0, 6));
        assert_eq!(parse_module("f(1/2,-1)[0,4]").unwrap(), ThreadSpec::f(rat(1, 2), int(-1)).bounded(0, 4));
        assert!(parse_module("mtilde[3,-2]").is_err());
        assert!(parse_module("b(1)[0,2]").is_err());
    }
}
