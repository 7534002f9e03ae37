use super::{RotatingFieldSpec, SpinError};
use crate::metric::{Connection, FourPotential, MetricError};
use crate::Vec3;

/// Exact connection of a static potential, from analytic derivatives of
/// `g_00 = A`, `g_0i = a_i = A G_i` and `g_ij = b_ij − δ_ij` with
/// `b_ij = A G_i G_j`.
pub fn static_connection<P: FourPotential + ?Sized>(pot: &P, at: &Vec3) -> Result<Connection, SpinError> {
    if !(at.norm() > 0.0) {
        return Err(SpinError::NonPositiveRadius(at.norm()));
    }
    let g0 = pot.g0(at);
    if !(g0 < 1.0) {
        return Err(MetricError::PotentialOutOfRange { g0 }.into());
    }
    let gv = pot.gi(at);
    let dg0 = pot.grad_g0(at);
    let dgv = pot.grad_gi(at); // dgv[(i, j)] = ∂_i G_j
    let lapse = 1.0 - g0;
    let big_a = 1.0 / (lapse * lapse);
    let big_b = lapse * lapse - gv.norm_squared();
    let da = dg0 * (2.0 / (lapse * lapse * lapse));

    // ∂_i a_j and ∂_i b_jk
    let mut d_a = [[0.0; 3]; 3];
    let mut d_b = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            d_a[i][j] = da[i] * gv[j] + big_a * dgv[(i, j)];
            for k in 0..3 {
                d_b[i][j][k] = da[i] * (gv[j] * gv[k])
                    + big_a * (dgv[(i, j)] * gv[k] + gv[j] * dgv[(i, k)]);
            }
        }
    }

    // lower[σ][µ][ν] = ½(∂_µ g_σν + ∂_ν g_σµ − ∂_σ g_µν); index 0 is time
    let mut lower = [[[0.0; 4]; 4]; 4];
    for j in 0..3 {
        lower[j + 1][0][0] = -0.5 * da[j];
        lower[0][j + 1][0] = 0.5 * da[j];
        lower[0][0][j + 1] = 0.5 * da[j];
    }
    for i in 0..3 {
        for j in 0..3 {
            // Γ_j,i0
            let v = 0.5 * (d_a[i][j] - d_a[j][i]);
            lower[j + 1][i + 1][0] = v;
            lower[j + 1][0][i + 1] = v;
        }
        for k in 0..3 {
            lower[0][i + 1][k + 1] = 0.5 * (d_a[i][k] + d_a[k][i]);
            for j in 0..3 {
                // summed in a fixed order so the result is exactly symmetric in (i, k)
                let (lo, hi) = (i.min(k), i.max(k));
                lower[j + 1][i + 1][k + 1] = 0.5 * (d_b[lo][j][hi] + d_b[hi][lo][j] - d_b[j][lo][hi]);
            }
        }
    }

    // raise with g^00 = B, g^0j = G_j, g^ij = −δ_ij
    let mut gamma = [[[0.0; 4]; 4]; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            let mut up0 = big_b * lower[0][mu][nu];
            for j in 0..3 {
                up0 += gv[j] * lower[j + 1][mu][nu];
            }
            gamma[0][mu][nu] = up0;
            for j in 0..3 {
                gamma[j + 1][mu][nu] = gv[j] * lower[0][mu][nu] - lower[j + 1][mu][nu];
            }
        }
    }
    Ok(Connection { gamma })
}

/// Connection of the rotating preset at `at`.
pub fn rotating_connections(spec: &RotatingFieldSpec, at: &Vec3) -> Result<Connection, SpinError> {
    static_connection(&spec.potential(), at)
}

/// `dS_i/dt` for coordinate velocity `v = dx/dt`.
pub fn spin_derivative(conn: &Connection, v: &Vec3, s: &Vec3) -> Vec3 {
    let g = &conn.gamma;
    let vs = v.dot(s);
    let mut out = Vec3::zeros();
    for i in 0..3 {
        let mut a = -g[0][i + 1][0];
        for k in 0..3 {
            a -= g[0][i + 1][k + 1] * v[k];
        }
        let mut acc = a * vs;
        for j in 0..3 {
            let mut c = g[j + 1][i + 1][0];
            for k in 0..3 {
                c += g[j + 1][i + 1][k + 1] * v[k];
            }
            acc += c * s[j];
        }
        out[i] = acc;
    }
    out
}

/// Spin transport kept to first order in `G_i`:
///
/// ```text
/// dS_i/dt ≈ −(ẋ·S) ∂_i ln √A − ½ S_j (∂_i a_j − ∂_j a_i)
///           + ½ (G·S) ∂_i A − ẋ^j ẋ^k S_j (∂_i a_k + ∂_k a_i)/(2A)
/// ```
pub fn linearized_spin_derivative(
    spec: &RotatingFieldSpec,
    at: &Vec3,
    v: &Vec3,
    s: &Vec3,
) -> Result<Vec3, SpinError> {
    let pot = spec.potential();
    let r = at.norm();
    if !(r > 0.0) {
        return Err(SpinError::NonPositiveRadius(r));
    }
    let g0 = pot.g0(at);
    let gv = pot.gi(at);
    let dgv = pot.grad_gi(at);
    let lapse = 1.0 - g0;
    let big_a = 1.0 / (lapse * lapse);
    let da = pot.grad_g0(at) * (2.0 / (lapse * lapse * lapse));
    let d_a = |i: usize, j: usize| da[i] * gv[j] + big_a * dgv[(i, j)];
    let vs = v.dot(s);
    let gs = gv.dot(s);
    let mut out = Vec3::zeros();
    for i in 0..3 {
        let mut acc = -vs * 0.5 * da[i] / big_a + 0.5 * gs * da[i];
        for j in 0..3 {
            acc -= 0.5 * s[j] * (d_a(i, j) - d_a(j, i));
            for k in 0..3 {
                acc -= v[j] * v[k] * s[j] * (d_a(i, k) + d_a(k, i)) / (2.0 * big_a);
            }
        }
        out[i] = acc;
    }
    Ok(out)
}
