#pragma once

#include "maiclass/classifiers/classifier.hpp"
#include "maiclass/corpus.hpp"
#include "maiclass/eval.hpp"
#include "maiclass/features.hpp"
#include "maiclass/optim.hpp"
#include "maiclass/report.hpp"
#include "maiclass/stats.hpp"
