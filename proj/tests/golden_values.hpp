// Generated by scripts/golden_values.py (mpmath, 50 dps). Do not edit.
#pragma once

namespace golden {
inline constexpr double kGamma1over3 = 2.67893853470774763;
inline constexpr double kGamma7over6 = 0.927719333630039201;
inline constexpr double kKF = 1.06074918610195579;
inline constexpr double kH0 = 1.15959526696392837;
inline constexpr double kK1 = 1.03579866723001286;
inline constexpr double kK2 = 1.14591559026164642;
inline constexpr double kCardyNorm = 0.5660466803631597;
inline constexpr double kCardyAtLambda0p3 = 0.401227613791358003;
inline constexpr double kHyp2f1At0p37 = 1.05453477604299888;
inline constexpr double kPsiRefX = 0.967895320340613484;
inline constexpr double kPsiRefY = 0.592374002482986168;
inline constexpr double kPsiRef = 2.37698524412698306;
inline constexpr double kBiRef = 1.0620791846393849;
inline constexpr double kLemmaRefOmega = 0.285223287477277274;
inline constexpr double kLemmaRef = 0.698189217835333352;
inline constexpr double kHarmonicRef = 0.41524934053856791;
inline constexpr double kGRef = 1.24647610327776354;
}  // namespace golden
