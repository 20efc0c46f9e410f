//! Conjugate-symmetric planar domains built from open disks and rectangles.

use num_complex::Complex;
use serde_json::{json, Value};

use crate::clifford::{complex_from_json, complex_to_json};
use crate::error::{Error, Result};
use crate::scalar::{cx, Real};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disk<T> {
    pub center: Complex<T>,
    pub radius: T,
}

/// Open rectangle `re.0 < Re z < re.1`, `im.0 < Im z < im.1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect<T> {
    pub re: (T, T),
    pub im: (T, T),
}

impl<T: Real> Disk<T> {
    fn inner_distance(&self, z: Complex<T>) -> T {
        self.radius - (z - self.center).norm()
    }

    fn mirror(&self) -> Self {
        Disk { center: self.center.conj(), radius: self.radius }
    }
}

impl<T: Real> Rect<T> {
    fn inner_distance(&self, z: Complex<T>) -> T {
        let dx = (z.re - self.re.0).min(self.re.1 - z.re);
        let dy = (z.im - self.im.0).min(self.im.1 - z.im);
        dx.min(dy)
    }

    fn mirror(&self) -> Self {
        Rect { re: self.re, im: (-self.im.1, -self.im.0) }
    }
}

/// Finite union of open disks and rectangles, closed under complex conjugation.
///
/// Every piece is mirrored across the real axis on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarDomain<T> {
    disks: Vec<Disk<T>>,
    rects: Vec<Rect<T>>,
}

impl<T: Real> PlanarDomain<T> {
    pub fn new(disks: Vec<Disk<T>>, rects: Vec<Rect<T>>) -> Result<Self> {
        let mut d = PlanarDomain { disks: Vec::new(), rects: Vec::new() };
        for disk in disks {
            if disk.radius.is_nan() || disk.radius <= T::zero() || !disk.radius.is_finite() || !disk.center.re.is_finite() || !disk.center.im.is_finite() {
                return Err(Error::Invalid("disk needs a finite centre and positive radius".into()));
            }
            d.push_disk(disk);
        }
        for rect in rects {
            let ok = rect.re.0 < rect.re.1 && rect.im.0 < rect.im.1;
            if !ok || ![rect.re.0, rect.re.1, rect.im.0, rect.im.1].iter().all(|v| v.is_finite()) {
                return Err(Error::Invalid("rectangle needs finite, increasing bounds".into()));
            }
            d.push_rect(rect);
        }
        if d.disks.is_empty() && d.rects.is_empty() {
            return Err(Error::Invalid("domain has no pieces".into()));
        }
        Ok(d)
    }

    pub fn disk(center: Complex<T>, radius: T) -> Result<Self> {
        Self::new(vec![Disk { center, radius }], Vec::new())
    }

    pub fn rect(re: (T, T), im: (T, T)) -> Result<Self> {
        Self::new(Vec::new(), vec![Rect { re, im }])
    }

    fn push_disk(&mut self, disk: Disk<T>) {
        let m = disk.mirror();
        if !self.disks.contains(&disk) {
            self.disks.push(disk);
        }
        if !self.disks.contains(&m) {
            self.disks.push(m);
        }
    }

    fn push_rect(&mut self, rect: Rect<T>) {
        let m = rect.mirror();
        if !self.rects.contains(&rect) {
            self.rects.push(rect);
        }
        if !self.rects.contains(&m) {
            self.rects.push(m);
        }
    }

    /// Union of two domains.
    pub fn union(&self, other: &Self) -> Self {
        let mut d = self.clone();
        for &disk in &other.disks {
            d.push_disk(disk);
        }
        for &rect in &other.rects {
            d.push_rect(rect);
        }
        d
    }

    pub fn disks(&self) -> &[Disk<T>] {
        &self.disks
    }

    pub fn rects(&self) -> &[Rect<T>] {
        &self.rects
    }

    pub fn piece_count(&self) -> usize {
        self.disks.len() + self.rects.len()
    }

    pub fn contains(&self, z: Complex<T>) -> bool {
        self.inner_distance(z) > T::zero()
    }

    /// Radius of a disk around `z` guaranteed to stay inside the domain.
    ///
    /// This is the largest distance from `z` to the boundary of a single piece
    /// containing it, a lower bound for the distance to the boundary of the union.
    /// Nonpositive when `z` is not inside any piece.
    pub fn inner_distance(&self, z: Complex<T>) -> T {
        let disks = self.disks.iter().map(|d| d.inner_distance(z));
        let rects = self.rects.iter().map(|r| r.inner_distance(z));
        disks.chain(rects).fold(T::neg_infinity(), T::max)
    }

    /// Whether the closed disk `(center, radius)` lies inside a single piece.
    pub fn contains_disk(&self, center: Complex<T>, radius: T) -> bool {
        self.inner_distance(center) > radius
    }

    /// `count` low-discrepancy interior points of each piece, piece by piece.
    pub fn sample_points(&self, count: usize) -> Vec<Complex<T>> {
        let shrink = T::lit(0.98);
        let mut out = Vec::with_capacity(count * self.piece_count());
        for d in &self.disks {
            for k in 1..=count {
                let (u, v) = halton2(k);
                let rho = d.radius * shrink * T::lit(u.sqrt());
                let phi = T::lit(std::f64::consts::TAU * v);
                out.push(d.center + cx(rho * phi.cos(), rho * phi.sin()));
            }
        }
        for r in &self.rects {
            let (w, h) = (r.re.1 - r.re.0, r.im.1 - r.im.0);
            for k in 1..=count {
                let (u, v) = halton2(k);
                let x = r.re.0 + w * (T::half() + shrink * T::lit(u - 0.5));
                let y = r.im.0 + h * (T::half() + shrink * T::lit(v - 0.5));
                out.push(cx(x, y));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let f = |x: T| x.to_f64_lossy();
        let disks: Vec<Value> = self
            .disks
            .iter()
            .map(|d| json!({"c": complex_to_json(d.center), "r": f(d.radius)}))
            .collect();
        let rects: Vec<Value> = self
            .rects
            .iter()
            .map(|r| json!({"re": [f(r.re.0), f(r.re.1)], "im": [f(r.im.0), f(r.im.1)]}))
            .collect();
        json!({"disks": disks, "rects": rects})
    }

    /// Reads `{"disks": [{"c": [re, im], "r": ..}], "rects": [{"re": [a, b], "im": [c, d]}]}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Invalid(format!("malformed domain JSON: {what}"));
        let pair = |v: Option<&Value>, what: &str| -> Result<(T, T)> {
            let a = v.and_then(Value::as_array).filter(|a| a.len() == 2).ok_or_else(|| bad(what))?;
            let x = a[0].as_f64().ok_or_else(|| bad(what))?;
            let y = a[1].as_f64().ok_or_else(|| bad(what))?;
            Ok((T::lit(x), T::lit(y)))
        };
        let list = |key: &str| -> Result<Vec<Value>> {
            match v.get(key) {
                None | Some(Value::Null) => Ok(Vec::new()),
                Some(Value::Array(a)) => Ok(a.clone()),
                Some(_) => Err(bad(key)),
            }
        };
        let disks = list("disks")?
            .iter()
            .map(|d| {
                let center = complex_from_json(d.get("c").ok_or_else(|| bad("disk centre"))?)?;
                let radius = d.get("r").and_then(Value::as_f64).ok_or_else(|| bad("disk radius"))?;
                Ok(Disk { center, radius: T::lit(radius) })
            })
            .collect::<Result<Vec<_>>>()?;
        let rects = list("rects")?
            .iter()
            .map(|r| Ok(Rect { re: pair(r.get("re"), "rect re")?, im: pair(r.get("im"), "rect im")? }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(disks, rects)
    }
}

fn radical_inverse(mut k: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while k > 0 {
        f /= base as f64;
        r += f * (k % base) as f64;
        k /= base;
    }
    r
}

/// Point `k` of the two-dimensional Halton sequence (bases 2 and 3).
fn halton2(k: usize) -> (f64, f64) {
    (radical_inverse(k, 2), radical_inverse(k, 3))
}
