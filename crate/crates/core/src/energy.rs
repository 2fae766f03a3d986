//! The energy Hilbert space `H_E`.
//!
//! Elements are real functions on the vertex set modulo constants. The
//! inner product is `⟨u,v⟩_E = Σ_{edges} μ_xy (u(x)−u(y))(v(x)−v(y))`,
//! summed once per unordered edge; this equals the halved sum over ordered
//! pairs. Classes modulo constants are represented concretely by pinning
//! the value at a chosen base point to 0, so equality of classes is
//! equality of representatives.

use std::sync::Arc;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedGraph};

/// A representative of an `H_E` class: a total real function on the host's
/// vertices with value 0 at the base point.
#[derive(Clone, Debug)]
pub struct EnergyVector {
    host: Arc<WeightedGraph>,
    base: usize,
    values: Vec<f64>,
}

impl EnergyVector {
    /// The zero vector.
    pub fn zero(host: Arc<WeightedGraph>, base: &VertexId) -> Result<Self> {
        let base = host.position(base)?;
        let values = vec![0.0; host.vertex_count()];
        Ok(EnergyVector { host, base, values })
    }

    /// The pinned representative of the Dirac mass `δ_x`: for `x ≠ base`
    /// the function with a single 1 at `x`; for `x = base` the class
    /// representative `δ_base − 1`.
    pub fn dirac(host: Arc<WeightedGraph>, x: &VertexId, base: &VertexId) -> Result<Self> {
        let xi = host.position(x)?;
        let mut v = Self::zero(host, base)?;
        if xi == v.base {
            for w in v.values.iter_mut() {
                *w = -1.0;
            }
            v.values[xi] = 0.0;
        } else {
            v.values[xi] = 1.0;
        }
        Ok(v)
    }

    /// Wraps a total function given in host vertex order, pinning it by
    /// subtracting its value at the base point.
    pub fn pinned(host: Arc<WeightedGraph>, base: &VertexId, mut values: Vec<f64>) -> Result<Self> {
        let base = host.position(base)?;
        if values.len() != host.vertex_count() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} values, got {}",
                host.vertex_count(),
                values.len()
            )));
        }
        let c = values[base];
        for v in values.iter_mut() {
            *v -= c;
        }
        values[base] = 0.0;
        Ok(EnergyVector { host, base, values })
    }

    /// Wraps values that are already pinned; rejects a nonzero base value.
    pub fn from_values(
        host: Arc<WeightedGraph>,
        base: &VertexId,
        values: Vec<f64>,
    ) -> Result<Self> {
        let bi = host.position(base)?;
        if values.len() != host.vertex_count() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} values, got {}",
                host.vertex_count(),
                values.len()
            )));
        }
        if values[bi] != 0.0 {
            return Err(Error::BaseNotPinned(values[bi]));
        }
        Ok(EnergyVector {
            host,
            base: bi,
            values,
        })
    }

    pub fn host(&self) -> &Arc<WeightedGraph> {
        &self.host
    }

    pub fn base_vertex(&self) -> &VertexId {
        self.host.vertex(self.base)
    }

    pub fn base_index(&self) -> usize {
        self.base
    }

    /// Values in host vertex order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_at(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn get(&self, x: &VertexId) -> Result<f64> {
        Ok(self.values[self.host.position(x)?])
    }

    fn same_host(&self, other: &EnergyVector) -> bool {
        self.base == other.base
            && (Arc::ptr_eq(&self.host, &other.host) || *self.host == *other.host)
    }

    /// Linear combination `Σ c_i u_i` of vectors on one host/base.
    pub fn linear_combination(terms: &[(f64, &EnergyVector)]) -> Result<Self> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty combination".to_string()))?;
        let mut out = EnergyVector {
            host: first.host.clone(),
            base: first.base,
            values: vec![0.0; first.values.len()],
        };
        for (c, u) in terms {
            if !out.same_host(u) {
                return Err(Error::HostMismatch);
            }
            for (o, v) in out.values.iter_mut().zip(&u.values) {
                *o += c * v;
            }
        }
        out.values[out.base] = 0.0;
        Ok(out)
    }

    /// `(Δu)(x) = μ(x)u(x) − Σ_{y∼x} μ_xy u(y)`.
    pub fn laplacian_at(&self, x: &VertexId) -> Result<f64> {
        Ok(self.laplacian_at_index(self.host.position(x)?))
    }

    pub fn laplacian_at_index(&self, i: usize) -> f64 {
        let mut acc = 0.0;
        for &(j, w) in self.host.neighbors(i) {
            acc += w * (self.values[i] - self.values[j]);
        }
        acc
    }

    /// The pointwise Laplacian at every vertex, in host vertex order. The
    /// result is a plain vertex function (it need not vanish at the base);
    /// it satisfies `(Δu)(x) = ⟨δ_x, u⟩_E` at every vertex.
    pub fn laplacian_vector(&self) -> Vec<f64> {
        (0..self.values.len())
            .map(|i| self.laplacian_at_index(i))
            .collect()
    }

    /// Serializes as a JSON object `{vertex-id: value}`.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (i, v) in self.host.vertices().iter().enumerate() {
            map.insert(v.to_string(), Value::from(self.values[i]));
        }
        Value::Object(map)
    }

    /// Loads from a JSON object `{vertex-id: value}`. Missing vertices get
    /// 0; unknown keys are errors; a nonzero base value is rejected.
    pub fn from_json(host: Arc<WeightedGraph>, base: &VertexId, json: &str) -> Result<Self> {
        let parsed: Value = serde_json::from_str(json)?;
        let obj = parsed
            .as_object()
            .ok_or_else(|| Error::DimensionMismatch("expected a JSON object".to_string()))?;
        let mut values = vec![0.0; host.vertex_count()];
        for (key, val) in obj {
            let idx = host.position(&VertexId::new(key))?;
            values[idx] = val
                .as_f64()
                .ok_or_else(|| Error::DimensionMismatch(format!("non-numeric value at `{key}`")))?;
        }
        Self::from_values(host, base, values)
    }
}

/// The energy inner product `Σ_{unordered edges} μ_xy (u(x)−u(y))(v(x)−v(y))`.
///
/// Symmetric and bilinear; requires both vectors to share the host graph
/// and base point.
pub fn energy_inner(u: &EnergyVector, v: &EnergyVector) -> Result<f64> {
    if !u.same_host(v) {
        return Err(Error::HostMismatch);
    }
    let (uv, vv) = (&u.values, &v.values);
    let mut acc = 0.0;
    for &(i, j, w) in u.host.edges() {
        acc += w * (uv[i] - uv[j]) * (vv[i] - vv[j]);
    }
    Ok(acc)
}

/// The energy norm squared `⟨u,u⟩_E`.
pub fn energy_norm_sq(u: &EnergyVector) -> f64 {
    energy_inner(u, u).expect("self inner product")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{make_family, Family};
    use proptest::prelude::*;

    fn dirac_on(
        g: &Arc<WeightedGraph>,
        x: &str,
        base: &str,
    ) -> EnergyVector {
        EnergyVector::dirac(g.clone(), &x.into(), &base.into()).unwrap()
    }

    #[test]
    fn dirac_norm_is_mu() {
        let g = make_family(Family::Tree, 3).unwrap();
        let d = dirac_on(&g, "01", "∅");
        assert_eq!(energy_norm_sq(&d), 3.0);
        let seg = make_family(Family::Segment, 5).unwrap();
        let d0 = EnergyVector::dirac(seg.clone(), &VertexId::integer(2), &VertexId::integer(0))
            .unwrap();
        assert_eq!(energy_norm_sq(&d0), 2.0);
    }

    #[test]
    fn adjacent_diracs() {
        let g = make_family(Family::Segment, 5).unwrap();
        let base = VertexId::integer(0);
        let dx = EnergyVector::dirac(g.clone(), &VertexId::integer(2), &base).unwrap();
        let dy = EnergyVector::dirac(g.clone(), &VertexId::integer(3), &base).unwrap();
        let dz = EnergyVector::dirac(g.clone(), &VertexId::integer(5), &base).unwrap();
        assert_eq!(energy_inner(&dx, &dy).unwrap(), -1.0);
        assert_eq!(energy_inner(&dx, &dz).unwrap(), 0.0);
    }

    #[test]
    fn zero_vector_has_zero_energy() {
        let g = make_family(Family::Tree, 2).unwrap();
        let z = EnergyVector::zero(g, &"∅".into()).unwrap();
        assert_eq!(energy_norm_sq(&z), 0.0);
    }

    #[test]
    fn pinned_dirac_at_base() {
        // The representative of δ_base is −1 off the base; its norm is μ(base).
        let g = make_family(Family::Tree, 2).unwrap();
        let d = dirac_on(&g, "∅", "∅");
        assert_eq!(d.get(&"∅".into()).unwrap(), 0.0);
        assert_eq!(d.get(&"10".into()).unwrap(), -1.0);
        assert_eq!(energy_norm_sq(&d), 2.0);
    }

    #[test]
    fn interior_laplacian_matches_second_difference() {
        let g = make_family(Family::Segment, 10).unwrap();
        let base = VertexId::integer(0);
        let values: Vec<f64> = g
            .vertices()
            .iter()
            .map(|v| {
                let t = v.as_integer().unwrap() as f64;
                t * t - 0.25 * t
            })
            .collect();
        let u = EnergyVector::pinned(g.clone(), &base, values).unwrap();
        for t in -9i64..=9 {
            let expected = 2.0 * u.get(&VertexId::integer(t)).unwrap()
                - u.get(&VertexId::integer(t - 1)).unwrap()
                - u.get(&VertexId::integer(t + 1)).unwrap();
            assert!((u.laplacian_at(&VertexId::integer(t)).unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn half_dipole_restriction_has_charge_at_origin() {
        // v(t) = max(t, 0) restricted to a finite segment: Δv(0) = −1.
        let g = make_family(Family::Segment, 10).unwrap();
        let values: Vec<f64> = g
            .vertices()
            .iter()
            .map(|v| v.as_integer().unwrap().max(0) as f64)
            .collect();
        let u = EnergyVector::pinned(g.clone(), &VertexId::integer(0), values).unwrap();
        assert_eq!(u.laplacian_at(&VertexId::integer(0)).unwrap(), -1.0);
    }

    #[test]
    fn constants_are_harmonic_in_the_interior() {
        let g = make_family(Family::Tree, 3).unwrap();
        let z = EnergyVector::zero(g.clone(), &"∅".into()).unwrap();
        assert!(z.laplacian_vector().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn laplacian_is_dirac_pairing() {
        let g = make_family(Family::Tree, 3).unwrap();
        let base: VertexId = "∅".into();
        let values: Vec<f64> = (0..g.vertex_count()).map(|i| (i as f64).sin()).collect();
        let u = EnergyVector::pinned(g.clone(), &base, values).unwrap();
        for x in g.vertices() {
            let dx = EnergyVector::dirac(g.clone(), x, &base).unwrap();
            let lhs = u.laplacian_at(x).unwrap();
            let rhs = energy_inner(&dx, &u).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12, "at {x}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn host_mismatch_rejected() {
        let g1 = make_family(Family::Segment, 3).unwrap();
        let g2 = make_family(Family::Segment, 4).unwrap();
        let u = EnergyVector::zero(g1, &VertexId::integer(0)).unwrap();
        let v = EnergyVector::zero(g2, &VertexId::integer(0)).unwrap();
        assert!(matches!(energy_inner(&u, &v), Err(Error::HostMismatch)));
    }

    #[test]
    fn json_round_trip_enforces_pinning() {
        let g = make_family(Family::Tree, 1).unwrap();
        let base: VertexId = "∅".into();
        let u = EnergyVector::pinned(g.clone(), &base, vec![0.0, 1.5, -0.5]).unwrap();
        let text = u.to_json().to_string();
        let back = EnergyVector::from_json(g.clone(), &base, &text).unwrap();
        assert_eq!(u.values(), back.values());
        assert!(matches!(
            EnergyVector::from_json(g, &base, r#"{"∅": 1.0}"#),
            Err(Error::BaseNotPinned(_))
        ));
    }

    proptest! {
        #[test]
        fn inner_product_symmetric_bilinear(
            seed_u in prop::collection::vec(-2.0f64..2.0, 15),
            seed_v in prop::collection::vec(-2.0f64..2.0, 15),
            seed_w in prop::collection::vec(-2.0f64..2.0, 15),
            a in -3.0f64..3.0,
            b in -3.0f64..3.0,
        ) {
            let g = make_family(Family::Segment, 7).unwrap();
            let base = VertexId::integer(0);
            let embed = |vals: &[f64]| {
                let mut full = vec![0.0; g.vertex_count()];
                full[..vals.len()].copy_from_slice(vals);
                EnergyVector::pinned(g.clone(), &base, full).unwrap()
            };
            let (u, v, w) = (embed(&seed_u), embed(&seed_v), embed(&seed_w));
            let uv = energy_inner(&u, &v).unwrap();
            let vu = energy_inner(&v, &u).unwrap();
            prop_assert!((uv - vu).abs() <= 1e-12);
            let combo = EnergyVector::linear_combination(&[(a, &u), (b, &v)]).unwrap();
            let lhs = energy_inner(&combo, &w).unwrap();
            let rhs = a * energy_inner(&u, &w).unwrap() + b * energy_inner(&v, &w).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
        }
    }
}
