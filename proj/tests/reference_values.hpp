#pragma once

// Values frozen from tests/oracle/gen_reference_values.py (mpmath series at 60+ digits).

namespace fdde::reference {

struct ClassicalValue {
  double alpha, beta, z, value;
};

inline constexpr ClassicalValue kClassical[] = {
    {0.5, 0.5, -1.0, 0.13660600739194928254},   {0.5, 1.0, -5.0, 0.11070463773306862637},
    {0.3, 1.0, -8.1, 0.088468013455173806718},  {0.8, 0.8, -18.1, 0.00061401827223383771777},
    {0.5, 1.0, -50.0, 0.0112815362653237725},   {0.8, 1.0, -3.0, 0.1129201986822173868},
    {0.3, 0.3, -2.5, 0.02297935393631868726},   {0.5, 1.0, 2.0, 108.94090438997797241},
    {0.5, 0.5, -0.3, 0.34380978317745975013},   {0.9, 1.0, -30.0, 0.003713707698459852111},
};

struct KernelValue {
  double alpha, a, b, tau;
  bool beta_is_alpha;
  double t, value;
};

inline constexpr KernelValue kKernel[] = {
    // alpha = 0.5, a = -5, b = 0.5, tau = 1
    {0.5, -5, 0.5, 1, false, 0.5, 0.15383860995001259193},
    {0.5, -5, 0.5, 1, false, 1.5, 0.10529523987858404429},
    {0.5, -5, 0.5, 1, false, 2.0, 0.089679783085185160986},
    {0.5, -5, 0.5, 1, false, 2.5, 0.080972025715432640955},
    {0.5, -5, 0.5, 1, false, 3.7, 0.065983653248625245533},
    {0.5, -5, 0.5, 1, false, 6.3, 0.050256641866576703499},
    {0.5, -5, 0.5, 1, true, 0.5, 0.028691511052802396234},
    {0.5, -5, 0.5, 1, true, 1.5, 0.011101971543866713558},
    {0.5, -5, 0.5, 1, true, 2.0, 0.0058956838420411861948},
    {0.5, -5, 0.5, 1, true, 2.5, 0.0046123145926830402778},
    {0.5, -5, 0.5, 1, true, 3.7, 0.0022377187814184301936},
    {0.5, -5, 0.5, 1, true, 6.3, 0.00093272286537760722418},
    // alpha = 0.3, a = -2, b = -1.5, tau = 0.7
    {0.3, -2, -1.5, 0.7, false, 0.4, 0.35234123972364475289},
    {0.3, -2, -1.5, 0.7, false, 1.1, 0.10628907010842451508},
    {0.3, -2, -1.5, 0.7, false, 2.9, 0.13590467297314048402},
    {0.3, -2, -1.5, 0.7, true, 0.4, 0.088935193895758774952},
    {0.3, -2, -1.5, 0.7, true, 1.1, -0.058602849377657764259},
    {0.3, -2, -1.5, 0.7, true, 2.9, 0.034111282250327770644},
    // alpha = 0.8, a = 1, b = 0.5, tau = 1 (growing)
    {0.8, 1, 0.5, 1, false, 0.5, 1.9280799273136313668},
    {0.8, 1, 0.5, 1, false, 1.5, 6.1860178364798915237},
    {0.8, 1, 0.5, 1, false, 3.0, 37.404104656347047461},
};

}  // namespace fdde::reference
