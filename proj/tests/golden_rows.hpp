#pragma once

#include <array>
#include <string>

// Golden per-class evaluation rows for a nine-member chest X-ray deep
// ensemble over the 14 NIH pathologies. The macro averages of these columns
// are frozen reproduction targets in the report tests and the acceptance
// suite.
namespace golden {

struct Row {
    const char* name;
    double auroc;
    double f1;
    double threshold;
    double brier;
    double ece;
    double nll;
    double tu_mean;
    double au_mean;
    double eu_mean;
};

inline constexpr std::array<Row, 14> kRows{{
    {"Atelectasis", 0.8215, 0.4084, 0.3153, 0.0841, 0.0953, 0.3037, 0.4512, 0.4267, 0.0245},
    {"Cardiomegaly", 0.9405, 0.5035, 0.2786, 0.0383, 0.0508, 0.1527, 0.2716, 0.2467, 0.0249},
    {"Consolidation", 0.7834, 0.2402, 0.2115, 0.0476, 0.0868, 0.2053, 0.3664, 0.3418, 0.0246},
    {"Edema", 0.8976, 0.2635, 0.2556, 0.0243, 0.0570, 0.1165, 0.2448, 0.2235, 0.0213},
    {"Effusion", 0.9059, 0.6245, 0.3656, 0.0885, 0.0922, 0.3062, 0.4444, 0.4209, 0.0235},
    {"Emphysema", 0.9705, 0.5584, 0.2631, 0.0208, 0.0567, 0.1057, 0.2404, 0.2165, 0.0239},
    {"Fibrosis", 0.8448, 0.1531, 0.2368, 0.0212, 0.0679, 0.1172, 0.2687, 0.2432, 0.0255},
    {"Hernia", 0.9937, 0.7500, 0.2836, 0.0021, 0.0195, 0.0241, 0.0937, 0.0805, 0.0133},
    {"Infiltration", 0.7078, 0.4145, 0.3081, 0.1402, 0.1006, 0.4524, 0.5660, 0.5467, 0.0193},
    {"Mass", 0.9126, 0.4917, 0.3270, 0.0430, 0.0873, 0.1877, 0.3570, 0.3287, 0.0283},
    {"Nodule", 0.7862, 0.3258, 0.2939, 0.0584, 0.0865, 0.2391, 0.3974, 0.3698, 0.0276},
    {"Pleural Thickening", 0.8073, 0.2448, 0.2296, 0.0425, 0.0736, 0.1861, 0.3357, 0.3089, 0.0268},
    {"Pneumonia", 0.7193, 0.0683, 0.1853, 0.0183, 0.0710, 0.1150, 0.2784, 0.2524, 0.0260},
    {"Pneumothorax", 0.8908, 0.3537, 0.3422, 0.0395, 0.0747, 0.1704, 0.3217, 0.2957, 0.0260},
}};

// Frozen macro targets over the rows above, tolerance 5e-5 (the rows carry
// four decimals, so the published averages are rounded to the same width).
inline constexpr double kMacroAuroc = 0.8559;
inline constexpr double kMacroF1 = 0.3857;
inline constexpr double kMacroBrier = 0.0478;
inline constexpr double kMacroEce = 0.0728;
inline constexpr double kMacroNll = 0.1916;
inline constexpr double kMacroTu = 0.3312;
inline constexpr double kMacroAu = 0.3073;
inline constexpr double kMacroEu = 0.0240;
inline constexpr double kMacroTolerance = 5e-5 + 1e-12;

} // namespace golden
