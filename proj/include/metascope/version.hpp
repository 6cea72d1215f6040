#pragma once

#define METASCOPE_VERSION "1.0.0"
