use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `ℤ_{m₁} × … × ℤ_{m_r}` with the bicharacter
/// `⟨a, b⟩ = exp(2πi Σ aᵢbᵢ/mᵢ)`.
///
/// Elements are encoded as integers in `0..d` in mixed radix, first
/// component most significant. Addition, negation and the bicharacter are
/// tabulated at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteAbelianGroup {
    orders: Vec<usize>,
    order: usize,
    add: Vec<usize>,
    neg: Vec<usize>,
    pairing: Vec<Complex64>,
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<usize>) -> Result<Self> {
        if orders.is_empty() || orders.contains(&0) {
            return Err(Error::InvalidDims(format!("invalid cyclic orders {orders:?}")));
        }
        let order: usize = orders.iter().product();
        if order < 2 {
            return Err(Error::InvalidDims("group must have at least two elements".into()));
        }
        let mut g = Self { orders, order, add: Vec::new(), neg: Vec::new(), pairing: Vec::new() };
        let lcm = g.orders.iter().fold(1, |acc, &m| lcm(acc, m));
        let d = order;
        g.add = vec![0; d * d];
        g.pairing = vec![Complex64::new(0.0, 0.0); d * d];
        g.neg = (0..d)
            .map(|a| g.encode(&g.decode(a).iter().zip(&g.orders).map(|(&x, &m)| (m - x) % m).collect::<Vec<_>>()))
            .collect();
        for a in 0..d {
            let ca = g.decode(a);
            for b in 0..d {
                let cb = g.decode(b);
                let sum: Vec<usize> =
                    ca.iter().zip(&cb).zip(&g.orders).map(|((&x, &y), &m)| (x + y) % m).collect();
                g.add[a * d + b] = g.encode(&sum);
                // Σ aᵢbᵢ/mᵢ as an exact fraction over lcm(mᵢ).
                let numer = ca
                    .iter()
                    .zip(&cb)
                    .zip(&g.orders)
                    .map(|((&x, &y), &m)| (x * y % m) * (lcm / m))
                    .sum::<usize>()
                    % lcm;
                g.pairing[a * d + b] = Complex64::from_polar(1.0, 2.0 * PI * numer as f64 / lcm as f64);
            }
        }
        Ok(g)
    }

    pub fn cyclic(d: usize) -> Result<Self> {
        Self::new(vec![d])
    }

    /// Parses names like `Z3` or `Z2xZ2`.
    pub fn parse(name: &str) -> Result<Self> {
        let orders = name
            .split(['x', 'X', '×'])
            .map(|part| {
                part.trim()
                    .strip_prefix(['Z', 'z'])
                    .and_then(|m| m.parse::<usize>().ok())
                    .ok_or_else(|| Error::InvalidConfig(format!("cannot parse group {name:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(orders)
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    /// `#A`.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn decode(&self, a: usize) -> Vec<usize> {
        let mut out = vec![0; self.orders.len()];
        let mut rest = a;
        for (slot, &m) in out.iter_mut().zip(&self.orders).rev() {
            *slot = rest % m;
            rest /= m;
        }
        out
    }

    pub fn encode(&self, comps: &[usize]) -> usize {
        comps.iter().zip(&self.orders).fold(0, |acc, (&x, &m)| acc * m + x % m)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order + b]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `⟨a, b⟩`.
    pub fn bichar(&self, a: usize, b: usize) -> Complex64 {
        self.pairing[a * self.order + b]
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(|m| format!("Z{m}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}
