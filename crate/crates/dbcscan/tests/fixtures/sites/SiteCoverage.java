package com.fixture.sites;

import androidx.annotation.ColorInt;
import androidx.annotation.NonNull;
import androidx.annotation.Nullable;
import androidx.annotation.StringRes;

public class SiteCoverage {

  @ColorInt
  private int background;

  @NonNull
  private String label = "x";

  public void configure(@NonNull String name, @StringRes int title, @Nullable Object extra) {
  }

  @Nullable
  public String describe() {
    return null;
  }

  @NonNull
  public String identity(@NonNull String input) {
    return input;
  }
}
