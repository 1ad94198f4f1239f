#pragma once

// Lexical phishing-URL detection: URL decomposition, the 26-feature schema,
// dataset handling, six from-scratch classifiers, evaluation metrics and the
// paired with/without-keyword experiment harness.

#include "phishurl/dataset.hpp"
#include "phishurl/errors.hpp"
#include "phishurl/experiment.hpp"
#include "phishurl/features.hpp"
#include "phishurl/metrics.hpp"
#include "phishurl/model.hpp"
#include "phishurl/model_io.hpp"
#include "phishurl/url.hpp"
