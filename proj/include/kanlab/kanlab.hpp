#pragma once

#include "certificate.hpp"
#include "context.hpp"
#include "counterexample.hpp"
#include "errors.hpp"
#include "frobenius.hpp"
#include "gtc.hpp"
#include "index_category.hpp"
#include "lifting.hpp"
#include "limits.hpp"
#include "presheaf.hpp"
#include "pushforward.hpp"
#include "random.hpp"
#include "run.hpp"
#include "scenario.hpp"
#include "search.hpp"
#include "serialize.hpp"
#include "suites.hpp"
#include "transcript.hpp"
