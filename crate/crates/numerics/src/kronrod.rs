//! 15-point Gauss-Kronrod panel rule (7-point Gauss embedded).

/// Abscissae of the 15-point Kronrod rule on [-1, 1], positive half.
/// Even indices are Kronrod extensions; odd indices are the Gauss points.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

/// Weights of the embedded 7-point Gauss rule (for XGK[1], XGK[3], XGK[5], XGK[7]).
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Weights of the 15-point Kronrod rule.
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// One panel's estimate: Kronrod value plus a scaled error bound.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Panel {
    pub a: f64,
    pub b: f64,
    pub value: f64,
    pub abs_error: f64,
}

/// Scales the raw Gauss/Kronrod difference into a reliable error bound
/// (QUADPACK heuristic; also enforces a round-off floor).
fn rescale_error(err: f64, result_abs: f64, result_asc: f64) -> f64 {
    let mut err = err.abs();
    if result_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / result_asc).powf(1.5);
        err = if scale < 1.0 { result_asc * scale } else { result_asc };
    }
    if result_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * result_abs;
        if min_err > err {
            err = min_err;
        }
    }
    err
}

/// Applies the 15-point Gauss-Kronrod rule to `f` on `[a, b]`.
///
/// Never evaluates `f` at the interval endpoints, which makes integrable
/// endpoint singularities and the open-ended `t/(1-t)` transform safe.
pub(crate) fn qk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();

    let f_center = f(center);
    let mut fv1 = [0.0f64; 7];
    let mut fv2 = [0.0f64; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        fv1[j] = f(center - dx);
        fv2[j] = f(center + dx);
    }

    let mut result_kronrod = f_center * WGK[7];
    let mut result_abs = result_kronrod.abs();
    for j in 0..7 {
        result_kronrod += WGK[j] * (fv1[j] + fv2[j]);
        result_abs += WGK[j] * (fv1[j].abs() + fv2[j].abs());
    }

    let mut result_gauss = f_center * WG[3];
    for j in 0..3 {
        let jg = 2 * j + 1;
        result_gauss += WG[j] * (fv1[jg] + fv2[jg]);
    }

    let mean = result_kronrod * 0.5;
    let mut result_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        result_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = result_kronrod * half;
    let raw_err = (result_kronrod - result_gauss) * half;
    Panel {
        a,
        b,
        value,
        abs_error: rescale_error(raw_err, result_abs * abs_half, result_asc * abs_half),
    }
}

/// Number of integrand evaluations per `qk15` call.
pub(crate) const QK15_EVALS: usize = 15;
