//! Named symbols selectable by id and a `key=value` parameter list.

use num_complex::Complex64;
use serde::Serialize;

use super::{Annulus, BilinearSymbol};
use crate::littlewood_paley::BumpProfile;
use crate::{Error, Result, Vec2};

#[derive(Debug, Clone, Serialize)]
pub struct SymbolInfo {
    pub id: &'static str,
    /// Parameter names with their defaults.
    pub params: Vec<(&'static str, f64)>,
    pub summary: &'static str,
}

/// Every registered symbol.
pub fn registry() -> Vec<SymbolInfo> {
    vec![
        SymbolInfo {
            id: "constant",
            params: vec![("c", 1.0)],
            summary: "m = c; T_m(f,g) = c f g",
        },
        SymbolInfo {
            id: "riesz-pair",
            params: vec![("axis", 1.0)],
            summary: "m = h(xi) h(eta) with h = -i z_axis/|z|; T_m(f,g) = R f * R g",
        },
        SymbolInfo {
            id: "commutator",
            params: vec![("j", 0.0), ("gamma", 0.1), ("alpha", 0.5), ("k", f64::NAN)],
            summary: "G(xi+eta) phi_j(xi+eta) - G(eta) phi_j(eta); with k set, times psi_{k-2}(xi) phi_k(eta)",
        },
        SymbolInfo {
            id: "kgtrj",
            params: vec![("gamma", 0.1), ("alpha", 0.5), ("j", 0.0), ("k", 3.0)],
            summary: "exp(gamma R(xi,eta)) phi_j(xi+eta) tilde-phi_k(xi) phi_k(eta), high-high to low",
        },
        SymbolInfo {
            id: "ksimj",
            params: vec![("gamma", 0.1), ("alpha", 0.5), ("j", 3.0), ("k", 3.0), ("l", f64::NAN)],
            summary: "exp(gamma R(xi,eta)) phi_j(xi+eta) phi_k(xi) phi_l(eta), l defaults to k-3",
        },
        SymbolInfo {
            id: "mA",
            params: vec![
                ("gamma", 0.1),
                ("alpha", 0.5),
                ("j", 3.0),
                ("k", 3.0),
                ("l", 0.0),
                ("sigma", 0.5),
                ("i", 1.0),
            ],
            summary: "alpha gamma exp(gamma R_s) |s xi+eta|^(alpha-2) (s xi_i+eta_i) phi_j(s xi+eta) phi_l(xi) phi_k(eta)",
        },
        SymbolInfo {
            id: "mB",
            params: vec![
                ("gamma", 0.1),
                ("alpha", 0.5),
                ("j", 3.0),
                ("k", 3.0),
                ("l", 0.0),
                ("sigma", 0.5),
                ("i", 1.0),
            ],
            summary: "exp(gamma R_s) (d_i phi_0)(2^-j (s xi+eta)) 2^-j phi_l(xi) phi_k(eta)",
        },
    ]
}

/// Splits `id:key=value,key=value` into the id and its parameters.
pub fn parse_symbol_spec(spec: &str) -> Result<(String, Vec<(String, f64)>)> {
    let (id, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut params = Vec::new();
    for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("symbol parameter `{item}` is not key=value")))?;
        let value: f64 = v.trim().parse().map_err(|_| Error::TypeMismatch {
            key: k.trim().to_string(),
            expected: "number",
            value: v.trim().to_string(),
        })?;
        params.push((k.trim().to_string(), value));
    }
    Ok((id.trim().to_string(), params))
}

fn norm(v: Vec2) -> f64 {
    v[0].hypot(v[1])
}

fn add(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] + b[0], a[1] + b[1]]
}

fn riesz(z: Vec2, axis: usize) -> Complex64 {
    let r = norm(z);
    if r == 0.0 {
        Complex64::default()
    } else {
        Complex64::new(0.0, -z[axis] / r)
    }
}

/// `|ξσ+η|^α − |ξ|^α − |η|^α`.
fn r_exponent(alpha: f64, sigma: f64, xi: Vec2, eta: Vec2) -> f64 {
    norm([sigma * xi[0] + eta[0], sigma * xi[1] + eta[1]]).powf(alpha)
        - norm(xi).powf(alpha)
        - norm(eta).powf(alpha)
}

pub(crate) fn commutator(
    p: BumpProfile,
    j: i32,
    gamma: f64,
    alpha: f64,
    k: Option<i32>,
) -> BilinearSymbol {
    let g = move |z: Vec2| {
        let r = norm(z);
        (gamma * r.powf(alpha)).exp() * p.phi(j, r)
    };
    let desc = format!(
        "commutator(j={j}, gamma={gamma}, alpha={alpha}{})",
        k.map_or(String::new(), |k| format!(", k={k}"))
    );
    BilinearSymbol::real(desc, k.map(Annulus::dyadic), move |xi, eta| {
        let base = g(add(xi, eta)) - g(eta);
        match k {
            Some(k) => base * p.psi(k - 2, norm(xi)) * p.phi(k, norm(eta)),
            None => base,
        }
    })
}

fn kgtrj(p: BumpProfile, gamma: f64, alpha: f64, j: i32, k: i32) -> BilinearSymbol {
    BilinearSymbol::real(
        format!("kgtrj(gamma={gamma}, alpha={alpha}, j={j}, k={k})"),
        Some(Annulus::dyadic(k)),
        move |xi, eta| {
            let loc = p.phi(j, norm(add(xi, eta))) * p.tilde_phi(k, norm(xi)) * p.phi(k, norm(eta));
            if loc == 0.0 {
                return 0.0;
            }
            (gamma * r_exponent(alpha, 1.0, xi, eta)).exp() * loc
        },
    )
}

fn ksimj(p: BumpProfile, gamma: f64, alpha: f64, j: i32, k: i32, l: i32) -> BilinearSymbol {
    BilinearSymbol::real(
        format!("ksimj(gamma={gamma}, alpha={alpha}, j={j}, k={k}, l={l})"),
        Some(Annulus::dyadic(l)),
        move |xi, eta| {
            let loc = p.phi(j, norm(add(xi, eta))) * p.phi(k, norm(xi)) * p.phi(l, norm(eta));
            if loc == 0.0 {
                return 0.0;
            }
            (gamma * r_exponent(alpha, 1.0, xi, eta)).exp() * loc
        },
    )
}

#[allow(clippy::too_many_arguments)]
fn m_ab(
    p: BumpProfile,
    part_a: bool,
    gamma: f64,
    alpha: f64,
    j: i32,
    k: i32,
    l: i32,
    sigma: f64,
    i: usize,
) -> BilinearSymbol {
    let name = if part_a { "mA" } else { "mB" };
    BilinearSymbol::real(
        format!(
            "{name}(gamma={gamma}, alpha={alpha}, j={j}, k={k}, l={l}, sigma={sigma}, i={})",
            i + 1
        ),
        Some(Annulus::dyadic(k)),
        move |xi, eta| {
            let loc = p.phi(l, norm(xi)) * p.phi(k, norm(eta));
            if loc == 0.0 {
                return 0.0;
            }
            let z = [sigma * xi[0] + eta[0], sigma * xi[1] + eta[1]];
            let rz = norm(z);
            let e = (gamma * r_exponent(alpha, sigma, xi, eta)).exp();
            if part_a {
                if rz == 0.0 {
                    return 0.0;
                }
                alpha * gamma * e * rz.powf(alpha - 2.0) * z[i] * p.phi(j, rz) * loc
            } else {
                let s = 2f64.powi(-j);
                e * p.grad_phi0([s * z[0], s * z[1]])[i] * s * loc
            }
        },
    )
}

struct Params<'a> {
    id: &'a str,
    given: &'a [(String, f64)],
    defaults: Vec<(&'static str, f64)>,
}

impl Params<'_> {
    fn get(&self, key: &str) -> f64 {
        self.given
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|p| p.1)
            .or_else(|| self.defaults.iter().find(|(k, _)| *k == key).map(|p| p.1))
            .unwrap_or(f64::NAN)
    }

    fn int(&self, key: &str) -> Result<i32> {
        let v = self.get(key);
        if v.fract() != 0.0 || !v.is_finite() {
            return Err(Error::TypeMismatch {
                key: format!("{}.{key}", self.id),
                expected: "integer",
                value: v.to_string(),
            });
        }
        Ok(v as i32)
    }

    fn opt_int(&self, key: &str) -> Result<Option<i32>> {
        if self.get(key).is_nan() {
            Ok(None)
        } else {
            self.int(key).map(Some)
        }
    }
}

/// Builds a registered symbol. Unknown ids and parameter names are
/// configuration errors; omitted parameters take their defaults.
pub fn build_symbol(id: &str, params: &[(String, f64)]) -> Result<BilinearSymbol> {
    let info = registry().into_iter().find(|s| s.id == id).ok_or_else(|| {
        Error::Config(format!(
            "unknown symbol `{id}`; registered: {}",
            registry()
                .iter()
                .map(|s| s.id)
                .collect::<Vec<_>>()
                .join(", ")
        ))
    })?;
    for (k, _) in params {
        if !info.params.iter().any(|(name, _)| name == k) {
            return Err(Error::UnknownKey {
                key: format!("{id}.{k}"),
                valid: info.params.iter().map(|p| p.0.to_string()).collect(),
            });
        }
    }
    let p = Params {
        id,
        given: params,
        defaults: info.params,
    };
    let profile = BumpProfile::default();
    let axis = |key: &str| -> Result<usize> {
        match p.int(key)? {
            1 => Ok(0),
            2 => Ok(1),
            other => Err(Error::Config(format!(
                "{id}.{key} must be 1 or 2, got {other}"
            ))),
        }
    };
    Ok(match id {
        "constant" => BilinearSymbol::constant(p.get("c")),
        "riesz-pair" => {
            let a = axis("axis")?;
            BilinearSymbol::new(
                format!("riesz-pair(axis={})", a + 1),
                None,
                move |xi, eta| riesz(xi, a) * riesz(eta, a),
            )
        }
        "commutator" => commutator(
            profile,
            p.int("j")?,
            p.get("gamma"),
            p.get("alpha"),
            p.opt_int("k")?,
        ),
        "kgtrj" => kgtrj(
            profile,
            p.get("gamma"),
            p.get("alpha"),
            p.int("j")?,
            p.int("k")?,
        ),
        "ksimj" => {
            let k = p.int("k")?;
            let l = p.opt_int("l")?.unwrap_or(k - 3);
            ksimj(profile, p.get("gamma"), p.get("alpha"), p.int("j")?, k, l)
        }
        "mA" | "mB" => m_ab(
            profile,
            id == "mA",
            p.get("gamma"),
            p.get("alpha"),
            p.int("j")?,
            p.int("k")?,
            p.int("l")?,
            p.get("sigma"),
            axis("i")?,
        ),
        _ => unreachable!("registry ids are matched above"),
    })
}
