# Control Module
