package com.app.ui;

import androidx.annotation.ColorInt;
import androidx.annotation.NonNull;
import androidx.annotation.Nullable;

public class ToolbarUtil {

  public static void setToolbarContentColorBasedOnToolbarColor(
      @NonNull Context context,
      @Nullable Menu menu,
      Toolbar toolbar,
      int toolbarColor,
      final @ColorInt int menuWidgetColor) {
  }
}
