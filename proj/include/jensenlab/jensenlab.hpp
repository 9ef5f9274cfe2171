#ifndef JENSENLAB_JENSENLAB_HPP
#define JENSENLAB_JENSENLAB_HPP

#include "jensenlab/control.hpp"
#include "jensenlab/domain.hpp"
#include "jensenlab/function_model.hpp"
#include "jensenlab/limits.hpp"
#include "jensenlab/orthogonal_stability.hpp"
#include "jensenlab/orthogonality.hpp"
#include "jensenlab/random.hpp"
#include "jensenlab/ratz.hpp"
#include "jensenlab/restricted.hpp"
#include "jensenlab/sampling.hpp"
#include "jensenlab/series.hpp"
#include "jensenlab/space.hpp"

#include "jensenlab/lab/bounds.hpp"
#include "jensenlab/lab/calibrate.hpp"
#include "jensenlab/lab/config.hpp"
#include "jensenlab/lab/experiment.hpp"
#include "jensenlab/lab/report.hpp"
#include "jensenlab/lab/search.hpp"

#endif  // JENSENLAB_JENSENLAB_HPP
