#include <string>
#include <vector>

#include "spikedet/errors.hpp"
#include "spikedet/wavelet.hpp"

namespace spikedet {

// Orthonormal scaling filters (synthesis low-pass), sum = sqrt(2). db values
// follow the classic spectral-factorization tables; sym8 is the
// least-asymmetric factor of the same order-8 product filter; coif4 solves
// the coiflet moment system (8 vanishing wavelet moments, 7 vanishing
// scaling-function moments about tap 8).
namespace {

const std::vector<double> kDb2 = {
    0.4829629131445341434, 0.8365163037378079056, 0.2241438680420133810,
    -0.1294095225512603812};

const std::vector<double> kDb4 = {
    0.2303778133088965009,   0.7148465705529156471,  0.6308807679298589079,
    -0.02798376941685985421, -0.1870348117190930841, 0.03084138183556076363,
    0.03288301166688519974,  -0.0105974017850690321};

const std::vector<double> kDb5 = {
    0.1601023979741929145,    0.6038292697971896705,  0.7243085284377729277,
    0.1384281459013207315,    -0.2422948870663820319, -0.03224486958463837465,
    0.07757149384004571352,   -0.006241490212798274274,
    -0.01258075199908199947,  0.003335725285473771278};

const std::vector<double> kCoif4 = {
    0.0008923139025370029644, -0.001629492425226785812, -0.007346167936268049769,
    0.01606894713157502651,   0.02668230466960483261,   -0.08126671024919372334,
    -0.05607731960356925566,  0.4153084270006822731,    0.7822389344242825898,
    0.4343860331143565424,    -0.0666274723668171566,   -0.09622042453595263696,
    0.03933442260558914633,   0.02508225333794960682,   -0.0152117281876972116,
    -0.005658283800130883707, 0.003751434697146086349,  0.001266561078925660206,
    -0.000589020224633216478, -0.0002599743371222568032,
    0.00006233885431278718113, 0.0000312298615991952653,
    -3.259647940030750678e-6, -1.784990914493346681e-6};

const std::vector<double> kSym8 = {
    0.001889950332767689184,  -0.0003029205147241330813, -0.01495225833706219912,
    0.003808752013894489463,  0.04913717967373028679,    -0.02721902991710348632,
    -0.05194583810788180074,  0.3644418948361789368,     0.7771857516996280286,
    0.4813596512590533916,    -0.06127335906781107784,   -0.1432942383512726628,
    0.007607487324976608192,  0.03169508781152599143,    -0.0005421323318000106893,
    -0.003382415951005002595};

}  // namespace

const std::vector<double>& scaling_filter(const std::string& name) {
  if (name == "db2") return kDb2;
  if (name == "db4") return kDb4;
  if (name == "db5") return kDb5;
  if (name == "coif4") return kCoif4;
  if (name == "sym8") return kSym8;
  throw ConfigError("unknown wavelet '" + name +
                    "' (supported: db2, db4, db5, coif4, sym8)");
}

}  // namespace spikedet
