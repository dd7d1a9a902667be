#pragma once

// Straight-line scalar transcription of the Canadian FWI system in Van
// Wagner's notation. Kept independent of the library's raster code.

#include <algorithm>
#include <cmath>

namespace oracle {

struct FwiDay {
  double ffmc, dmc, dc, isi, bui, fwi, dsr;
};

inline FwiDay fwi_day(double f0, double p0, double d0, double T, double H, double W, double ro, int month) {
  static const double Le[12] = {6.5, 7.5, 9.0, 12.8, 13.9, 13.9, 12.4, 10.9, 9.4, 8.0, 7.0, 6.0};
  static const double Lf[12] = {-1.6, -1.6, -1.6, 0.9, 3.8, 5.8, 6.4, 5.0, 2.4, 0.4, -1.6, -1.6};
  FwiDay o{};

  // FFMC
  double mo = 147.2 * (101.0 - f0) / (59.5 + f0);
  if (ro > 0.5) {
    double rf = ro - 0.5;
    double mr;
    if (mo <= 150.0) {
      mr = mo + 42.5 * rf * std::exp(-100.0 / (251.0 - mo)) * (1.0 - std::exp(-6.93 / rf));
    } else {
      mr = mo + 42.5 * rf * std::exp(-100.0 / (251.0 - mo)) * (1.0 - std::exp(-6.93 / rf)) +
           0.0015 * (mo - 150.0) * (mo - 150.0) * std::pow(rf, 0.5);
    }
    if (mr > 250.0) mr = 250.0;
    mo = mr;
  }
  double Ed = 0.942 * std::pow(H, 0.679) + 11.0 * std::exp((H - 100.0) / 10.0) +
              0.18 * (21.1 - T) * (1.0 - std::exp(-0.115 * H));
  double Ew = 0.618 * std::pow(H, 0.753) + 10.0 * std::exp((H - 100.0) / 10.0) +
              0.18 * (21.1 - T) * (1.0 - std::exp(-0.115 * H));
  double m;
  if (mo > Ed) {
    double ko = 0.424 * (1.0 - std::pow(H / 100.0, 1.7)) + 0.0694 * std::pow(W, 0.5) * (1.0 - std::pow(H / 100.0, 8));
    double kd = ko * 0.581 * std::exp(0.0365 * T);
    m = Ed + (mo - Ed) * std::pow(10.0, -kd);      
  } else if (mo < Ew) {
    double kl = 0.424 * (1.0 - std::pow((100.0 - H) / 100.0, 1.7)) +
                0.0694 * std::pow(W, 0.5) * (1.0 - std::pow((100.0 - H) / 100.0, 8));
    double kw = kl * 0.581 * std::exp(0.0365 * T);
    m = Ew - (Ew - mo) * std::pow(10.0, -kw);      
  } else {
    m = mo;
  }
  double F = 59.5 * (250.0 - m) / (147.2 + m);
  if (F > 101.0) F = 101.0;
  if (F < 0.0) F = 0.0;
  o.ffmc = F;

  // DMC
  double Pr = p0;
  if (ro > 1.5) {
    double re = 0.92 * ro - 1.27;                    
    double Mo = 20.0 + std::exp(5.6348 - p0 / 43.43);
    double b;
    if (p0 <= 33.0) {
      b = 100.0 / (0.5 + 0.3 * p0);
    } else if (p0 <= 65.0) {
      b = 14.0 - 1.3 * std::log(p0);
    } else {
      b = 6.2 * std::log(p0) - 17.2;
    }
    double Mr = Mo + 1000.0 * re / (48.77 + b * re);
    Pr = 244.72 - 43.43 * std::log(Mr - 20.0);      
    if (Pr < 0.0) Pr = 0.0;
  }
  double Tk = T < -1.1 ? -1.1 : T;
  double K = 1.894 * (Tk + 1.1) * (100.0 - H) * Le[month - 1] * 1e-6;
  double P = Pr + 100.0 * K;                                        
  if (P < 0.0) P = 0.0;
  o.dmc = P;

  // DC
  double Dr = d0;
  if (ro > 2.8) {
    double rd = 0.83 * ro - 1.27;          
    double Qo = 800.0 * std::exp(-d0 / 400.0);
    double Qr = Qo + 3.937 * rd;          
    Dr = 400.0 * std::log(800.0 / Qr);    
    if (Dr < 0.0) Dr = 0.0;
  }
  double Td = T < -2.8 ? -2.8 : T;
  double V = 0.36 * (Td + 2.8) + Lf[month - 1];
  if (V < 0.0) V = 0.0;
  double D = Dr + 0.5 * V;
  if (D < 0.0) D = 0.0;
  o.dc = D;

  // ISI
  double mm = 147.2 * (101.0 - F) / (59.5 + F);
  double fW = std::exp(0.05039 * W);                                      
  double fF = 91.9 * std::exp(-0.1386 * mm) * (1.0 + std::pow(mm, 5.31) / 4.93e7);
  double R = 0.208 * fW * fF;                                             
  o.isi = R;

  // BUI
  double U;
  if (P == 0.0 && D == 0.0) {
    U = 0.0;
  } else if (P <= 0.4 * D) {
    U = 0.8 * P * D / (P + 0.4 * D);
  } else {
    U = P - (1.0 - 0.8 * D / (P + 0.4 * D)) * (0.92 + std::pow(0.0114 * P, 1.7));
  }
  if (U < 0.0) U = 0.0;
  o.bui = U;

  // FWI
  double fD = U <= 80.0 ? 0.626 * std::pow(U, 0.809) + 2.0 : 1000.0 / (25.0 + 108.64 * std::exp(-0.023 * U));
  double B = 0.1 * R * fD;
  double S = B > 1.0 ? std::exp(2.72 * std::pow(0.434 * std::log(B), 0.647)) : B;
  o.fwi = S;
  o.dsr = 0.0272 * std::pow(S, 1.77);
  return o;
}

// Magnus relative humidity, coefficients 17.625 / 243.04.
inline double rh_from_dew(double T, double Td) {
  double es = std::exp(17.625 * T / (243.04 + T));
  double e = std::exp(17.625 * Td / (243.04 + Td));
  return 100.0 * e / es;
}

}  // namespace oracle
