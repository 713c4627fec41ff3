//! Quotient-ring isomorphism certificates and the ring file format.

use std::collections::BTreeMap;

use super::field::Field;
use super::ideal::{jacobian_ideal, Ideal};
use super::parse::{parse_poly, parse_poly_list, Ring};
use super::poly::Poly;
use super::PolyError;
use crate::text::{self, Line, ParseError};

/// `C[vars] / ideal`.
#[derive(Clone, Debug)]
pub struct QuotientRing<C> {
    pub ring: Ring,
    pub ideal: Ideal<C>,
}

impl<C: Field> QuotientRing<C> {
    pub fn new(ring: Ring, gens: Vec<Poly<C>>) -> Self {
        let ideal = Ideal::new(ring.nvars(), gens);
        QuotientRing { ring, ideal }
    }

    pub fn show(&self) -> String {
        let gens: Vec<String> = self.ideal.gens().iter().map(|g| self.ring.show(g)).collect();
        let gens = if gens.is_empty() { "0".to_string() } else { gens.join(", ") };
        format!("{} / ({})", self.ring.decl::<C>(), gens)
    }
}

/// A claimed isomorphism `source ≅ target`: `forward[i]` is the image of the
/// i-th source variable, `inverse[j]` the image of the j-th target variable.
#[derive(Clone, Debug)]
pub struct RingMapCert<C> {
    pub source: QuotientRing<C>,
    pub target: QuotientRing<C>,
    pub forward: Vec<Poly<C>>,
    pub inverse: Vec<Poly<C>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CertReport {
    /// Source generators whose image is not in the target ideal.
    pub forward_failures: Vec<String>,
    /// Target generators whose image is not in the source ideal.
    pub inverse_failures: Vec<String>,
    /// Source variables `x` with `ψ(φ(x)) ≠ x`.
    pub source_roundtrip_failures: Vec<String>,
    /// Target variables `y` with `φ(ψ(y)) ≠ y`.
    pub target_roundtrip_failures: Vec<String>,
}

impl CertReport {
    pub fn passes(&self) -> bool {
        self.forward_failures.is_empty()
            && self.inverse_failures.is_empty()
            && self.source_roundtrip_failures.is_empty()
            && self.target_roundtrip_failures.is_empty()
    }
}

pub fn check_ring_iso<C: Field>(c: &RingMapCert<C>) -> Result<CertReport, PolyError> {
    let (s, t) = (&c.source, &c.target);
    if c.forward.len() != s.ring.nvars() || c.inverse.len() != t.ring.nvars() {
        return Err(PolyError::RingMismatch("map does not cover every variable".into()));
    }
    let mut report = CertReport::default();
    for g in s.ideal.gens() {
        if !t.ideal.contains(&g.substitute(&c.forward)?) {
            report.forward_failures.push(s.ring.show(g));
        }
    }
    for g in t.ideal.gens() {
        if !s.ideal.contains(&g.substitute(&c.inverse)?) {
            report.inverse_failures.push(t.ring.show(g));
        }
    }
    for i in 0..s.ring.nvars() {
        let back = c.forward[i].substitute(&c.inverse)?;
        if !s.ideal.contains(&back.sub(&Poly::var(s.ring.nvars(), i))) {
            report.source_roundtrip_failures.push(s.ring.vars[i].clone());
        }
    }
    for j in 0..t.ring.nvars() {
        let back = c.inverse[j].substitute(&c.forward)?;
        if !t.ideal.contains(&back.sub(&Poly::var(t.ring.nvars(), j))) {
            report.target_roundtrip_failures.push(t.ring.vars[j].clone());
        }
    }
    Ok(report)
}

fn relocate(e: ParseError, line: &Line, offset: usize) -> ParseError {
    ParseError::new(line.number, line.col(offset) + e.col - 1, e.message)
}

fn parse_quotient<C: Field>(line: &Line, rest_off: usize) -> Result<QuotientRing<C>, ParseError> {
    let rest = &line.text[rest_off..];
    let (decl, ideal_part) = match rest.find('/') {
        Some(p) if rest[..p].contains(']') => (&rest[..p], Some((p + 1, &rest[p + 1..]))),
        _ => (rest, None),
    };
    let ring = Ring::parse_decl(decl.trim(), &C::name()).map_err(|e| relocate(e, line, rest_off))?;
    let gens = match ideal_part {
        Some((off, s)) => parse_poly_list(s, &ring.vars).map_err(|e| relocate(e, line, rest_off + off))?,
        None => Vec::new(),
    };
    let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
    Ok(QuotientRing::new(ring, gens))
}

fn parse_assignments<C: Field>(
    body: &str,
    from: &Ring,
    to: &Ring,
    line: &Line,
) -> Result<Vec<Poly<C>>, ParseError> {
    let mut images: Vec<Option<Poly<C>>> = vec![None; from.nvars()];
    for (_, piece) in text::split_top_level(body, ',') {
        for entry in piece.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (lhs, rhs) = entry
                .split_once("->")
                .ok_or_else(|| line.error(0, format!("expected `<var> -> <poly>`, found `{entry}`")))?;
            let i = from
                .index_of(lhs.trim())
                .ok_or_else(|| line.error(0, format!("unknown source variable `{}`", lhs.trim())))?;
            let p = parse_poly(rhs, &to.vars).map_err(|e| line.error(0, e.message))?;
            images[i] = Some(p);
        }
    }
    images
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| line.error(0, format!("no image for `{}`", from.vars[i]))))
        .collect()
}

/// Parses
///
/// ```text
/// source QQ[x,u,v] / (x^2 + u*v, 2*x, u, v)
/// target QQ[x] / (x^2, 2*x)
/// map { x -> x, u -> 0, v -> 0, inverse { x -> x } }
/// ```
///
/// The `map` block may span several lines.
pub fn parse_cert<C: Field>(src: &str) -> Result<RingMapCert<C>, ParseError> {
    let lines = text::lines(src);
    let mut source = None;
    let mut target = None;
    let mut map_block: Option<(Line, String)> = None;
    let mut i = 0;
    while i < lines.len() {
        let line = &lines[i];
        let words = line.words();
        match words[0].1 {
            "source" => source = Some(parse_quotient::<C>(line, words[0].1.len())?),
            "target" => target = Some(parse_quotient::<C>(line, words[0].1.len())?),
            "map" => {
                let mut body = line.text.to_string();
                while body.matches('{').count() > body.matches('}').count() {
                    i += 1;
                    let next = lines.get(i).ok_or_else(|| line.error(0, "unterminated map block"))?;
                    body.push_str(", ");
                    body.push_str(next.text);
                }
                map_block = Some((line.clone(), body));
            }
            _ => return Err(line.error(0, format!("unrecognized line `{}`", line.text))),
        }
        i += 1;
    }
    let source = source.ok_or_else(|| ParseError::new(1, 1, "missing `source` line"))?;
    let target = target.ok_or_else(|| ParseError::new(1, 1, "missing `target` line"))?;
    let (line, body) = map_block.ok_or_else(|| ParseError::new(1, 1, "missing `map` block"))?;
    let (_, inner, _) = text::braced(&body).ok_or_else(|| line.error(0, "expected `map { ... }`"))?;
    let (forward_part, inverse_part) = match inner.find("inverse") {
        Some(p) => {
            let (_, inv, _) =
                text::braced(&inner[p..]).ok_or_else(|| line.error(0, "expected `inverse { ... }`"))?;
            (inner[..p].to_string(), inv.to_string())
        }
        None => return Err(line.error(0, "missing `inverse { ... }`")),
    };
    let forward = parse_assignments(&forward_part, &source.ring, &target.ring, &line)?;
    let inverse = parse_assignments(&inverse_part, &target.ring, &source.ring, &line)?;
    Ok(RingMapCert { source, target, forward, inverse })
}

/// Named polynomials and ideals over one ring:
///
/// ```text
/// ring QQ[x,y,z]
/// poly f = x^2*y + z^2
/// ideal J = jacobian(f)
/// ideal M = (x, z)
/// ```
///
/// Earlier `poly` names may appear in later expressions.
#[derive(Clone, Debug)]
pub struct RingFile<C> {
    pub ring: Ring,
    pub polys: BTreeMap<String, Poly<C>>,
    /// Ideals in declaration order.
    pub ideals: Vec<(String, Ideal<C>)>,
}

impl<C: Field> RingFile<C> {
    pub fn poly(&self, name: &str) -> Option<&Poly<C>> {
        self.polys.get(name)
    }

    pub fn ideal(&self, name: &str) -> Option<&Ideal<C>> {
        self.ideals.iter().find(|(n, _)| n == name).map(|(_, i)| i)
    }
}

pub fn parse_ring_file<C: Field>(src: &str) -> Result<RingFile<C>, ParseError> {
    let lines = text::lines(src);
    let first = lines.first().ok_or_else(|| ParseError::new(1, 1, "empty ring file"))?;
    let words = first.words();
    if words[0].1 != "ring" || words.len() < 2 {
        return Err(first.error(0, "expected `ring <field>[<vars>]`"));
    }
    let ring = Ring::parse_decl(&first.text[words[1].0..], &C::name()).map_err(|e| relocate(e, first, words[1].0))?;
    let n = ring.nvars();
    let mut polys: BTreeMap<String, Poly<C>> = BTreeMap::new();
    let mut ideals: Vec<(String, Ideal<C>)> = Vec::new();
    for line in &lines[1..] {
        let words = line.words();
        let kind = words[0].1;
        let eq = line.text.find('=').ok_or_else(|| line.error(0, "expected `<kind> <name> = <value>`"))?;
        if words.len() < 3 || (kind != "poly" && kind != "ideal") {
            return Err(line.error(0, format!("unrecognized line `{}`", line.text)));
        }
        let name = words[1].1.to_string();
        let rhs_off = eq + 1;
        let rhs = &line.text[rhs_off..];
        // names of earlier polynomials act as extra variables, then get substituted
        let mut vars = ring.vars.clone();
        let names: Vec<&String> = polys.keys().collect();
        vars.extend(names.iter().map(|s| s.to_string()));
        let mut images: Vec<Poly<C>> = (0..n).map(|i| Poly::var(n, i)).collect();
        images.extend(names.iter().map(|s| polys[*s].clone()));
        let resolve = |p: Poly<C>| p.substitute(&images).expect("matching arity");
        match kind {
            "poly" => {
                let p = parse_poly(rhs, &vars).map_err(|e| relocate(e, line, rhs_off))?;
                polys.insert(name, resolve(p));
            }
            _ => {
                let t = rhs.trim();
                let lead = rhs.len() - rhs.trim_start().len();
                let ideal = if let Some(arg) = t.strip_prefix("jacobian") {
                    let arg_off = rhs_off + lead + "jacobian".len();
                    let f = parse_poly(arg, &vars).map_err(|e| relocate(e, line, arg_off))?;
                    jacobian_ideal(&resolve(f)).map_err(|e| line.error(rhs_off, e.to_string()))?
                } else {
                    let gens = parse_poly_list(rhs, &vars).map_err(|e| relocate(e, line, rhs_off))?;
                    Ideal::new(n, gens.into_iter().map(resolve).filter(|g| !g.is_zero()).collect())
                };
                ideals.push((name, ideal));
            }
        }
    }
    Ok(RingFile { ring, polys, ideals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::field::Q;

    #[test]
    fn identity_certificate() {
        let c: RingMapCert<Q> =
            parse_cert("source QQ[x] / (x^2)\ntarget QQ[x] / (x^2)\nmap { x -> x, inverse { x -> x } }\n")
                .unwrap();
        assert!(check_ring_iso(&c).unwrap().passes());
    }

    #[test]
    fn broken_certificate_names_generator() {
        let c: RingMapCert<Q> =
            parse_cert("source QQ[x] / (x^2)\ntarget QQ[x] / (x^3)\nmap { x -> x, inverse { x -> x } }\n")
                .unwrap();
        let r = check_ring_iso(&c).unwrap();
        assert_eq!(r.forward_failures, vec!["x^2".to_string()]);
        assert!(r.inverse_failures.is_empty());
    }

    #[test]
    fn multiline_map_block() {
        let src = "source QQ[y,w] / (w^2 + y)\ntarget QQ[w]\nmap {\n  y -> -w^2\n  w -> w\n  inverse { w -> w }\n}\n";
        let c: RingMapCert<Q> = parse_cert(src).unwrap();
        assert!(check_ring_iso(&c).unwrap().passes());
    }

    #[test]
    fn ring_file() {
        let src = "ring QQ[x,y,z]\npoly f = x^2*y + z^2\nideal J = jacobian(f)\nideal M = (x, z)\nideal K = (f, x)\n";
        let rf: RingFile<Q> = parse_ring_file(src).unwrap();
        assert_eq!(rf.ideal("J").unwrap().gens().len(), 4);
        assert!(rf.ideal("J").unwrap().equal_up_to_radical(rf.ideal("M").unwrap()).unwrap());
        assert_eq!(rf.ring.show(&rf.ideal("K").unwrap().gens()[0]), "x^2*y + z^2");
    }

    #[test]
    fn ring_file_errors() {
        let e = parse_ring_file::<Q>("ring QQ[x]\npoly f = x + q\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 14));
    }
}
